#include "dynr/quantum.hpp"

#include <algorithm>
#include <cmath>

#include "dynr/errors.hpp"

namespace dynr {

Mat mat_id(int n) {
    Mat I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

Mat mat_mul(const Mat& A, const Mat& B) {
    Mat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int t = 0; t < A.cols; ++t) {
            double a = A(i, t);
            if (a == 0.0) continue;
            for (int j = 0; j < B.cols; ++j) C(i, j) += a * B(t, j);
        }
    return C;
}

Mat mat_add(const Mat& A, const Mat& B) {
    Mat C = A;
    for (std::size_t k = 0; k < C.a.size(); ++k) C.a[k] += B.a[k];
    return C;
}

Mat mat_sub(const Mat& A, const Mat& B) {
    Mat C = A;
    for (std::size_t k = 0; k < C.a.size(); ++k) C.a[k] -= B.a[k];
    return C;
}

Mat mat_scale(double c, const Mat& A) {
    Mat C = A;
    for (auto& x : C.a) x *= c;
    return C;
}

double mat_maxabs(const Mat& A) {
    double m = 0.0;
    for (double x : A.a) m = std::max(m, std::abs(x));
    return m;
}

RFun const_R(const Mat& M2) {
    return [M2](const std::vector<double>&) { return M2; };
}

std::vector<Mat> rep_mats(const Superalgebra& g) {
    std::vector<Mat> out;
    out.reserve(g.dim);
    for (const auto& M : g.basis) {
        Mat D(g.N, g.N);
        for (int i = 0; i < g.N; ++i)
            for (int j = 0; j < g.N; ++j) D(i, j) = to_double(M[i][j]);
        out.push_back(std::move(D));
    }
    return out;
}

std::vector<std::vector<double>> vec_weights(const Superalgebra& g) {
    std::vector<std::vector<double>> mu(g.N, std::vector<double>(g.H));
    for (int c = 0; c < g.N; ++c)
        for (int i = 0; i < g.H; ++i)
            mu[c][i] = to_double(g.basis[g.cartan_idx[i]][c][c]);
    return mu;
}

Mat rho2(const Superalgebra& g, const Tensor2& terms, const std::vector<double>& lam) {
    int N = g.N;
    Mat out(N * N, N * N);
    for (const auto& [key, co] : terms) {
        double c = evaluate(co, lam);
        const RatMat& A = g.basis[key.first];
        const RatMat& B = g.basis[key.second];
        int pb = g.parity[key.second];
        for (int ar = 0; ar < N; ++ar)
            for (int ac = 0; ac < N; ++ac) {
                if (A[ar][ac] == 0) continue;
                double av = to_double(A[ar][ac]);
                for (int br = 0; br < N; ++br)
                    for (int bc = 0; bc < N; ++bc) {
                        if (B[br][bc] == 0) continue;
                        double s = (pb && g.vparity[ac]) ? -1.0 : 1.0;
                        out(ar * N + br, ac * N + bc) += c * s * av * to_double(B[br][bc]);
                    }
            }
    }
    return out;
}

Mat ps_mat(const Superalgebra& g) {
    int N = g.N;
    Mat P(N * N, N * N);
    for (int c = 0; c < N; ++c)
        for (int d = 0; d < N; ++d) {
            double s = (g.vparity[c] && g.vparity[d]) ? -1.0 : 1.0;
            P(d * N + c, c * N + d) = s;
        }
    return P;
}

Mat embed(const Superalgebra& g, const Mat& M2, int s1, int s2) {
    int N = g.N;
    int N3 = N * N * N;
    if (s1 == 1 && s2 == 2) {
        Mat out(N3, N3);
        for (int a = 0; a < N * N; ++a)
            for (int b = 0; b < N * N; ++b) {
                if (M2(a, b) == 0.0) continue;
                for (int e = 0; e < N; ++e) out(a * N + e, b * N + e) += M2(a, b);
            }
        return out;
    }
    if (s1 == 2 && s2 == 3) {
        Mat out(N3, N3);
        for (int a = 0; a < N * N; ++a)
            for (int b = 0; b < N * N; ++b) {
                if (M2(a, b) == 0.0) continue;
                for (int c = 0; c < N; ++c)
                    out(c * N * N + a, c * N * N + b) += M2(a, b);
            }
        return out;
    }
    if (s1 == 1 && s2 == 3) {
        Mat P12 = embed(g, ps_mat(g), 1, 2);
        Mat M23 = embed(g, M2, 2, 3);
        return mat_mul(mat_mul(P12, M23), P12);
    }
    throw DomainError("embedding slots must be (1,2), (2,3) or (1,3)");
}

ResidualReport qdybe_residual(const Superalgebra& g, const RFun& R, double gamma,
                              const std::vector<std::vector<double>>& lams,
                              double tol) {
    int N = g.N;
    int N3 = N * N * N;
    auto mu = vec_weights(g);
    Mat P12 = embed(g, ps_mat(g), 1, 2);
    ResidualReport rep;
    rep.check = "qdybe";
    rep.n_requested = (int)lams.size();
    rep.tolerance = tol;
    for (const auto& lam : lams) {
        double worst;
        try {
            Mat R_at = R(lam);
            std::vector<Mat> Rs;
            Rs.reserve(N);
            for (int k = 0; k < N; ++k) {
                std::vector<double> shifted(g.H);
                for (int i = 0; i < g.H; ++i) shifted[i] = lam[i] - gamma * mu[k][i];
                Rs.push_back(R(shifted));
            }
            Mat M12s(N3, N3), M23s(N3, N3), M13s(N3, N3);
            for (int k = 0; k < N; ++k) {
                const Mat& R2 = Rs[k];
                Mat blk(N3, N3);
                for (int a = 0; a < N * N; ++a)
                    for (int b = 0; b < N * N; ++b) {
                        if (R2(a, b) == 0.0) continue;
                        M12s(a * N + k, b * N + k) += R2(a, b);
                        M23s(k * N * N + a, k * N * N + b) += R2(a, b);
                        blk(k * N * N + a, k * N * N + b) += R2(a, b);
                    }
                M13s = mat_add(M13s, mat_mul(mat_mul(P12, blk), P12));
            }
            Mat M13 = embed(g, R_at, 1, 3);
            Mat M23 = embed(g, R_at, 2, 3);
            Mat M12 = embed(g, R_at, 1, 2);
            Mat lhs = mat_mul(mat_mul(M12s, M13), M23s);
            Mat rhs = mat_mul(mat_mul(M23, M13s), M12);
            worst = mat_maxabs(mat_sub(lhs, rhs));
        } catch (const PoleProximity&) {
            continue;
        }
        rep.per_sample.push_back(worst);
        rep.max_residual = std::max(rep.max_residual, worst);
        ++rep.n_evaluated;
    }
    if (rep.n_evaluated == 0)
        throw DomainError("qdybe: no sample point was evaluable away from the poles");
    rep.pass = rep.max_residual <= tol;
    return rep;
}

RFun r_to_R(const Superalgebra& g, const RField& r, double gamma) {
    const Superalgebra* gp = &g;
    Tensor2 terms = r.terms;
    int N = g.N;
    return [gp, terms, gamma, N](const std::vector<double>& lam) {
        return mat_sub(mat_id(N * N), mat_scale(gamma, rho2(*gp, terms, lam)));
    };
}

Mat template_R(const Superalgebra& g, const Mat& alpha, const Mat& beta) {
    int N = g.N;
    Mat R(N * N, N * N);
    for (int a = 0; a < N; ++a) R(a * N + a, a * N + a) = 1.0;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            if (a == b) continue;
            R(a * N + b, a * N + b) += alpha(a, b);
            R(a * N + b, b * N + a) += beta(a, b);
        }
    return R;
}

bool is_zero_weight(const Superalgebra& g, const Mat& R, double tol) {
    int N = g.N;
    for (int i = 0; i < g.H; ++i) {
        Mat h(N, N);
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                h(a, b) = to_double(g.basis[g.cartan_idx[i]][a][b]);
        Mat H2(N * N, N * N);
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                if (h(a, b) == 0.0) continue;
                for (int e = 0; e < N; ++e) {
                    H2(a * N + e, b * N + e) += h(a, b);
                    H2(e * N + a, e * N + b) += h(a, b);
                }
            }
        if (mat_maxabs(mat_sub(mat_mul(R, H2), mat_mul(H2, R))) > tol) return false;
    }
    return true;
}

namespace {

std::vector<std::complex<double>> eig2(double m00, double m01, double m10, double m11) {
    double tr = m00 + m11;
    double det = m00 * m11 - m01 * m10;
    double disc = tr * tr - 4.0 * det;
    std::vector<std::complex<double>> ev;
    if (disc >= 0.0) {
        double s = std::sqrt(disc);
        ev = {{(tr - s) / 2.0, 0.0}, {(tr + s) / 2.0, 0.0}};
    } else {
        double s = std::sqrt(-disc) / 2.0;
        ev = {{tr / 2.0, -s}, {tr / 2.0, s}};
    }
    std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return ev;
}

} // namespace

HeckeReport hecke_check(const Superalgebra& g, const Mat& R, double q, double tol) {
    int N = g.N;
    if (!is_zero_weight(g, R))
        throw DomainError("hecke: operator is not zero-weight");
    Mat TR = mat_mul(ps_mat(g), R);
    HeckeReport rep;
    rep.ok = true;
    for (int a = 0; a < N; ++a) {
        int idx = a * N + a;
        double ev = TR(idx, idx);
        bool good = std::abs(ev - 1.0) <= tol;
        double leak = 0.0;
        for (int r = 0; r < N * N; ++r)
            if (r != idx) leak = std::max(leak, std::abs(TR(r, idx)));
        good = good && leak <= tol;
        HeckeBlock blk;
        blk.kind = "diag";
        blk.a = a;
        blk.b = a;
        blk.eigenvalues = {{ev, 0.0}};
        blk.expected = {1.0};
        blk.ok = good;
        rep.blocks.push_back(std::move(blk));
        rep.ok = rep.ok && good;
    }
    for (int a = 0; a < N; ++a)
        for (int b = a + 1; b < N; ++b) {
            int i1 = a * N + b, i2 = b * N + a;
            double leak = 0.0;
            for (int r = 0; r < N * N; ++r) {
                if (r == i1 || r == i2) continue;
                leak = std::max(leak, std::abs(TR(r, i1)));
                leak = std::max(leak, std::abs(TR(r, i2)));
            }
            auto evs = eig2(TR(i1, i1), TR(i1, i2), TR(i2, i1), TR(i2, i2));
            int st = g.vparity[a] * g.vparity[b];
            std::vector<double> expect = {1.0, -(st ? -1.0 : 1.0) * q};
            std::sort(expect.begin(), expect.end());
            bool good = leak <= tol;
            for (int k = 0; k < 2; ++k)
                good = good && std::abs(evs[k] - std::complex<double>(expect[k], 0.0)) <= tol;
            HeckeBlock blk;
            blk.kind = "mixed";
            blk.a = a;
            blk.b = b;
            blk.eigenvalues = evs;
            blk.expected = expect;
            blk.ok = good;
            rep.blocks.push_back(std::move(blk));
            rep.ok = rep.ok && good;
        }
    return rep;
}

namespace {

std::pair<double, double> fit_line(const std::vector<double>& x,
                                   const std::vector<double>& y) {
    double mx = 0.0, my = 0.0;
    int n = (int)x.size();
    for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    double slope = num / den;
    return {slope, my - slope * mx};
}

} // namespace

SlopeReport semiclassical_slope(const Superalgebra& g, const RField& r,
                                int n_lams, std::uint64_t seed,
                                std::vector<double> gammas) {
    SlopeReport rep;
    rep.gammas = gammas;
    auto lams = field_samples(g, r.terms, n_lams, seed);
    for (double gm : gammas) {
        auto qr = qdybe_residual(g, r_to_R(g, r, gm), gm, lams);
        rep.residuals.push_back(qr.max_residual);
    }
    for (double res : rep.residuals)
        if (res < 1e-13) rep.inconclusive = true;
    if (rep.inconclusive) return rep;
    std::vector<double> lg, lraw, lnorm;
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        lg.push_back(std::log(gammas[i]));
        lraw.push_back(std::log(rep.residuals[i]));
        lnorm.push_back(std::log(rep.residuals[i] / gammas[i]));
    }
    rep.raw_slope = fit_line(lg, lraw).first;
    auto [ns, ni] = fit_line(lg, lnorm);
    rep.normalized_slope = ns;
    rep.intercept = ni;
    return rep;
}

} // namespace dynr
