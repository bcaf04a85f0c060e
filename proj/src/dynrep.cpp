#include "dynr/dynrep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "dynr/errors.hpp"

namespace dynr {

DOp dop(RFun coef, std::vector<double> shift) {
    return {DTerm{std::move(coef), std::move(shift)}};
}

DOp dop_add(const DOp& a, const DOp& b) {
    DOp out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

DOp dop_scale(double c, const DOp& d) {
    DOp out;
    out.reserve(d.size());
    for (const auto& t : d) {
        RFun f = t.coef;
        out.push_back({[c, f](const std::vector<double>& lam) {
                           return mat_scale(c, f(lam));
                       },
                       t.shift});
    }
    return out;
}

DOp dop_compose(const DOp& a, const DOp& b) {
    DOp out;
    for (const auto& t1 : a)
        for (const auto& t2 : b) {
            RFun f = t1.coef;
            RFun g = t2.coef;
            std::vector<double> b1 = t1.shift;
            std::vector<double> sh(t1.shift.size());
            for (std::size_t i = 0; i < sh.size(); ++i)
                sh[i] = t1.shift[i] + t2.shift[i];
            out.push_back({[f, g, b1](const std::vector<double>& lam) {
                               std::vector<double> l2(lam.size());
                               for (std::size_t i = 0; i < lam.size(); ++i)
                                   l2[i] = lam[i] + b1[i];
                               return mat_mul(f(lam), g(l2));
                           },
                           std::move(sh)});
        }
    return out;
}

namespace {

using ShiftKey = std::vector<long long>;

ShiftKey key_of(const std::vector<double>& shift) {
    ShiftKey k(shift.size());
    for (std::size_t i = 0; i < shift.size(); ++i)
        k[i] = std::llround(shift[i] * 1e9);
    return k;
}

std::map<ShiftKey, std::vector<const DTerm*>> by_key(const DOp& d) {
    std::map<ShiftKey, std::vector<const DTerm*>> m;
    for (const auto& t : d) m[key_of(t.shift)].push_back(&t);
    return m;
}

} // namespace

double dop_maxdiff(const DOp& a, const DOp& b, int H, int nsamp,
                   std::uint64_t seed, const std::vector<std::vector<double>>* lams) {
    std::vector<std::vector<double>> pts;
    if (lams) {
        pts = *lams;
    } else {
        std::mt19937_64 rng(seed);
        for (int k = 0; k < nsamp; ++k) {
            std::vector<double> lam(H);
            for (int i = 0; i < H; ++i)
                lam[i] = 0.5 + 1.5 * ((double)(rng() >> 11) / 9007199254740992.0);
            pts.push_back(std::move(lam));
        }
    }
    auto m1 = by_key(a);
    auto m2 = by_key(b);
    std::set<ShiftKey> keys;
    for (const auto& [k, v] : m1) keys.insert(k);
    for (const auto& [k, v] : m2) keys.insert(k);
    double worst = 0.0;
    for (const auto& k : keys) {
        for (const auto& lam : pts) {
            Mat A, B;
            auto i1 = m1.find(k);
            auto i2 = m2.find(k);
            if (i1 != m1.end()) {
                for (const DTerm* t : i1->second) {
                    Mat v = t->coef(lam);
                    A = A.rows ? mat_add(A, v) : v;
                }
            }
            if (i2 != m2.end()) {
                for (const DTerm* t : i2->second) {
                    Mat v = t->coef(lam);
                    B = B.rows ? mat_add(B, v) : v;
                }
            }
            if (!A.rows) A = Mat(B.rows, B.cols);
            if (!B.rows) B = Mat(A.rows, A.cols);
            worst = std::max(worst, mat_maxabs(mat_sub(A, B)));
        }
    }
    return worst;
}

DOp mu_l(const Superalgebra& g, const ScalarFn& f) {
    auto mus = vec_weights(g);
    int N = g.N;
    int H = g.H;
    return dop(
        [mus, f, N, H](const std::vector<double>& lam) {
            Mat M(N, N);
            for (int e = 0; e < N; ++e) {
                std::vector<double> l2(H);
                for (int i = 0; i < H; ++i) l2[i] = lam[i] - mus[e][i];
                M(e, e) = f(l2);
            }
            return M;
        },
        std::vector<double>(H, 0.0));
}

DOp mu_r(const Superalgebra& g, const ScalarFn& f) {
    int N = g.N;
    return dop(
        [f, N](const std::vector<double>& lam) { return mat_scale(f(lam), mat_id(N)); },
        std::vector<double>(g.H, 0.0));
}

std::vector<std::vector<DOp>> build_L(const Superalgebra& g, const RFun& R,
                                      char idxmode, char shiftmode) {
    if (idxmode != 'A' && idxmode != 'B')
        throw DomainError("index convention must be 'A' or 'B'");
    if (shiftmode != 'a' && shiftmode != 'b')
        throw DomainError("shift convention must be 'a' or 'b'");
    int N = g.N;
    auto mus = vec_weights(g);
    std::vector<std::vector<DOp>> L(N, std::vector<DOp>(N));
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            RFun coef = [R, idxmode, a, b, N](const std::vector<double>& lam) {
                Mat Rm = R(lam);
                Mat M(N, N);
                for (int c = 0; c < N; ++c)
                    for (int d = 0; d < N; ++d)
                        M(c, d) = (idxmode == 'A') ? Rm(a * N + c, b * N + d)
                                                   : Rm(b * N + d, a * N + c);
                return M;
            };
            const auto& w = (shiftmode == 'b') ? mus[b] : mus[a];
            std::vector<double> sh(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) sh[i] = -w[i];
            L[a][b] = dop(std::move(coef), std::move(sh));
        }
    return L;
}

double rll_residual(const Superalgebra& g, const RFun& R, char idxmode,
                    char shiftmode, SignRule signs, int nsamp,
                    std::uint64_t seed, const std::vector<std::vector<double>>* lams) {
    int N = g.N;
    const auto& p = g.vparity;
    auto L = build_L(g, R, idxmode, shiftmode);
    double worst = 0.0;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            for (int c = 0; c < N; ++c)
                for (int d = 0; d < N; ++d) {
                    DOp lhs, rhs;
                    for (int x = 0; x < N; ++x)
                        for (int y = 0; y < N; ++y) {
                            ScalarFn f1 = [R, a, c, x, y, N](const std::vector<double>& lam) {
                                return R(lam)(a * N + c, x * N + y);
                            };
                            double s = 1.0;
                            if ((signs == SignRule::Koszul || signs == SignRule::Left) &&
                                p[y] && ((p[x] + p[b]) % 2))
                                s = -1.0;
                            DOp t = dop_compose(mu_l(g, f1),
                                                dop_compose(L[x][b], L[y][d]));
                            lhs = dop_add(lhs, dop_scale(s, t));
                            ScalarFn f2 = [R, b, d, x, y, N](const std::vector<double>& lam) {
                                return R(lam)(x * N + y, b * N + d);
                            };
                            double s2 = 1.0;
                            if ((signs == SignRule::Koszul || signs == SignRule::Right) &&
                                p[y] && ((p[a] + p[x]) % 2))
                                s2 = -1.0;
                            DOp t2 = dop_compose(mu_r(g, f2),
                                                 dop_compose(L[c][y], L[a][x]));
                            rhs = dop_add(rhs, dop_scale(s2, t2));
                        }
                    worst = std::max(worst, dop_maxdiff(lhs, rhs, g.H, nsamp, seed, lams));
                }
    return worst;
}

DOp theta(const Superalgebra& gV, const Superalgebra& gW, const DOp& d1,
          const DOp& d2, bool superkron) {
    auto musW = vec_weights(gW);
    std::set<std::vector<double>> uniq(musW.begin(), musW.end());
    std::vector<std::vector<double>> mus(uniq.begin(), uniq.end());
    int NV = gV.N, NW = gW.N;
    std::vector<int> pV = gV.vparity, pW = gW.vparity;
    DOp out;
    for (const auto& t1 : d1)
        for (const auto& t2 : d2) {
            RFun C1 = t1.coef;
            RFun C2 = t2.coef;
            RFun coef = [C1, C2, mus, musW, NV, NW, pV, pW,
                         superkron](const std::vector<double>& lam) {
                Mat out2(NV * NW, NV * NW);
                for (const auto& mu : mus) {
                    std::vector<double> l2(lam.size());
                    for (std::size_t i = 0; i < lam.size(); ++i)
                        l2[i] = lam[i] - mu[i];
                    Mat A = C1(l2);
                    Mat Bfull = C2(lam);
                    Mat B(NW, NW);
                    for (int r = 0; r < NW; ++r)
                        if (musW[r] == mu)
                            for (int cc = 0; cc < NW; ++cc) B(r, cc) = Bfull(r, cc);
                    for (int i = 0; i < NV; ++i)
                        for (int j = 0; j < NV; ++j) {
                            if (A(i, j) == 0.0) continue;
                            for (int k = 0; k < NW; ++k)
                                for (int l2i = 0; l2i < NW; ++l2i) {
                                    if (B(k, l2i) == 0.0) continue;
                                    double s = 1.0;
                                    if (superkron) {
                                        int pb = (pW[k] + pW[l2i]) % 2;
                                        if (pb && pV[j]) s = -1.0;
                                    }
                                    out2(i * NW + k, j * NW + l2i) +=
                                        s * A(i, j) * B(k, l2i);
                                }
                        }
                }
                return out2;
            };
            out.push_back({std::move(coef), t2.shift});
        }
    return out;
}

Calibration calibrate_convention(double const_tol, double match_tol) {
    Calibration cal;
    Superalgebra g11 = build_algebra(AlgKind::gl, 1, 1);
    Superalgebra g21 = build_algebra(AlgKind::gl, 2, 1);
    std::vector<std::pair<char, char>> conventions = {
        {'A', 'b'}, {'A', 'a'}, {'B', 'b'}, {'B', 'a'}};
    std::vector<std::pair<char, char>> stage1;
    for (auto [idx, sh] : conventions) {
        bool ok = true;
        std::string line = "constant stage (";
        line += idx;
        line += ',';
        line += sh;
        line += "):";
        for (const Superalgebra* g : {&g11, &g21}) {
            Mat idm = mat_id(g->N * g->N);
            Mat Ps = ps_mat(*g);
            for (const Mat* M : {&idm, &Ps}) {
                double res = rll_residual(*g, const_R(*M), idx, sh);
                char buf[32];
                std::snprintf(buf, sizeof(buf), " %.2e", res);
                line += buf;
                ok = ok && res <= const_tol;
            }
        }
        line += ok ? " keep" : " drop";
        cal.log.push_back(line);
        if (ok) stage1.push_back({idx, sh});
    }
    if (stage1.empty())
        throw CalibrationError("no convention passes the constant stage");

    // lambda-dependent zero-weight probe on the bigger algebra
    int N = g21.N, H = g21.H;
    std::mt19937_64 crng(5);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> ca(N * N), cb(N * N);
    for (auto& x : ca) x = nd(crng);
    for (auto& x : cb) x = nd(crng);
    const Superalgebra* gp = &g21;
    RFun probe = [gp, ca, cb, N](const std::vector<double>& lam) {
        double ssum = 0.0;
        for (double x : lam) ssum += x;
        Mat alpha(N, N), beta(N, N);
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                alpha(a, b) = 1.0 + 0.2 * ca[a * N + b] * std::sin(ssum);
                beta(a, b) = 0.2 * cb[a * N + b] * std::cos(lam[0]);
            }
        return template_R(*gp, alpha, beta);
    };
    if (!is_zero_weight(g21, probe(std::vector<double>(H, 1.0))))
        throw CalibrationError("probe operator is not zero-weight");
    std::mt19937_64 lrng(11);
    std::vector<std::vector<double>> lams;
    for (int k = 0; k < 3; ++k) {
        std::vector<double> lam(H);
        for (int i = 0; i < H; ++i)
            lam[i] = 0.5 + 1.5 * ((double)(lrng() >> 11) / 9007199254740992.0);
        lams.push_back(std::move(lam));
    }
    double qd = qdybe_residual(g21, probe, 1.0, lams).max_residual;
    std::vector<std::pair<char, char>> matched;
    for (auto [idx, sh] : stage1) {
        double rl = rll_residual(g21, probe, idx, sh, SignRule::Koszul, 3, 1, &lams);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "probe stage (%c,%c): rll %.6e vs qdybe %.6e",
                      idx, sh, rl, qd);
        cal.log.push_back(buf);
        if (std::abs(rl - qd) < match_tol) matched.push_back({idx, sh});
    }
    if (matched.size() != 1)
        throw CalibrationError("probe stage matched " + std::to_string(matched.size()) +
                               " conventions instead of one");
    cal.idxmode = matched[0].first;
    cal.shiftmode = matched[0].second;
    return cal;
}

} // namespace dynr
