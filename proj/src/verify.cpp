#include "dynr/verify.hpp"

#include <algorithm>
#include <cmath>

#include "dynr/errors.hpp"

namespace dynr {

std::vector<Expr> pole_guards(const Tensor2& terms) {
    std::vector<Expr> out;
    for (const auto& [key, v] : terms) collect_pole_args(v, out);
    return out;
}

std::vector<std::vector<double>> field_samples(const Superalgebra& g,
                                               const Tensor2& terms, int n,
                                               std::uint64_t seed) {
    auto guards = pole_guards(terms);
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> lams;
    lams.reserve(n);
    for (int k = 0; k < n; ++k) lams.push_back(sample_lambda(rng, g.H, guards));
    return lams;
}

namespace {

// Evaluate a per-sample residual function over points kept clear of the
// field's poles, skipping any point where evaluation still lands on one.
template <class F>
ResidualReport run_check(const std::string& name, const Superalgebra& g,
                         const Tensor2& guard_src, int n_samples,
                         std::uint64_t seed, double tol, F&& residual_at) {
    ResidualReport rep;
    rep.check = name;
    rep.n_requested = n_samples;
    rep.tolerance = tol;
    auto lams = field_samples(g, guard_src, n_samples, seed);
    for (const auto& lam : lams) {
        double v;
        try {
            v = residual_at(lam);
        } catch (const PoleProximity&) {
            continue;
        }
        rep.per_sample.push_back(v);
        rep.max_residual = std::max(rep.max_residual, v);
        ++rep.n_evaluated;
    }
    if (rep.n_evaluated == 0)
        throw DomainError(name + ": no sample point was evaluable away from the poles");
    rep.pass = rep.max_residual <= tol;
    return rep;
}

} // namespace

ResidualReport cdybe_residual(const Superalgebra& g, const RField& r,
                              int n_samples, std::uint64_t seed, double tol) {
    Tensor3 T = dybe_tensor(r.terms, r.l_idx, g);
    return run_check("cdybe", g, r.terms, n_samples, seed, tol,
                     [&](const std::vector<double>& lam) { return t_maxabs3(T, lam); });
}

ResidualReport cybe_residual(const Superalgebra& g, const Tensor2& terms,
                             int n_samples, std::uint64_t seed, double tol) {
    Tensor3 T = yb_bracket(terms, terms, g);
    return run_check("cybe", g, terms, n_samples, seed, tol,
                     [&](const std::vector<double>& lam) { return t_maxabs3(T, lam); });
}

ResidualReport unitarity_residual(const Superalgebra& g, const RField& r,
                                  const Rat& eps, int n_samples,
                                  std::uint64_t seed, double tol) {
    Tensor2 diff = t_add(r.terms, super_twist(r.terms, g));
    for (const auto& [key, v] : g.casimir()) t_acc(diff, key, cst(-eps * v));
    return run_check("unitarity", g, r.terms, n_samples, seed, tol,
                     [&](const std::vector<double>& lam) { return t_maxabs(diff, lam); });
}

ResidualReport invariance_residual(const Superalgebra& g, const RField& r,
                                   const std::vector<int>& subspace,
                                   int n_samples, std::uint64_t seed, double tol) {
    std::vector<Tensor2> acts;
    for (int i : subspace) {
        if (i < 0 || i >= g.H)
            throw DomainError("invariance: subspace index out of range");
        acts.push_back(adjoint2(g.cartan_idx[i], r.terms, g));
    }
    return run_check("invariance", g, r.terms, n_samples, seed, tol,
                     [&](const std::vector<double>& lam) {
                         double worst = 0.0;
                         for (const auto& T : acts)
                             worst = std::max(worst, t_maxabs(T, lam));
                         return worst;
                     });
}

ResidualReport l_skew_residual(const Superalgebra& g, const RField& r,
                               int n_samples, std::uint64_t seed, double tol) {
    Tensor2 diff = t_add(r.terms, t_scale(Rat(-1), super_twist(r.terms, g)));
    std::set<int> lset;
    for (int i : r.l_idx) lset.insert(g.cartan_idx[i]);
    Tensor2 sub;
    for (const auto& [key, v] : diff)
        if (lset.count(key.first) || lset.count(key.second)) sub[key] = v;
    return run_check("l_skew", g, r.terms, n_samples, seed, tol,
                     [&](const std::vector<double>& lam) { return t_maxabs(sub, lam); });
}

ResidualReport field_difference(const Superalgebra& g, const RField& a,
                                const RField& b, int n_samples,
                                std::uint64_t seed, double tol) {
    Tensor2 diff = t_add(a.terms, t_scale(Rat(-1), b.terms));
    Tensor2 guard_src = t_add(a.terms, b.terms);
    return run_check("field_difference", g, guard_src, n_samples, seed, tol,
                     [&](const std::vector<double>& lam) { return t_maxabs(diff, lam); });
}

GaugeTransform two_form_shift(const TwoForm& C) {
    GaugeTransform t;
    t.kind = GaugeTransform::Kind::TwoFormShift;
    t.C = C;
    return t;
}

GaugeTransform translate_by(const RatVec& nu) {
    GaugeTransform t;
    t.kind = GaugeTransform::Kind::Translate;
    t.nu = nu;
    return t;
}

GaugeTransform weyl_rotate(const std::vector<int>& perm) {
    GaugeTransform t;
    t.kind = GaugeTransform::Kind::WeylRotate;
    t.perm = perm;
    return t;
}

namespace {

void validate_perm(const Superalgebra& g, const std::vector<int>& perm) {
    if ((int)perm.size() != g.N)
        throw DomainError("rotation must permute all vector indices");
    std::vector<int> seen(g.N, 0);
    for (int a = 0; a < g.N; ++a) {
        int im = perm[a];
        if (im < 0 || im >= g.N || seen[im]++)
            throw DomainError("rotation is not a permutation of the vector indices");
        if (g.vparity[im] != g.vparity[a])
            throw DomainError("rotation mixes even and odd vector indices");
    }
}

// Coordinates of every rotated basis element over the fixed basis.
std::vector<RatVec> weyl_amap(const Superalgebra& g, const std::vector<int>& perm) {
    std::vector<RatVec> amap(g.dim);
    for (int idx = 0; idx < g.dim; ++idx) {
        const RatMat& Mx = g.basis[idx];
        RatMat img(g.N, RatVec(g.N, Rat(0)));
        for (int a = 0; a < g.N; ++a)
            for (int b = 0; b < g.N; ++b)
                if (Mx[a][b] != 0) img[perm[a]][perm[b]] = Mx[a][b];
        amap[idx] = g.coords(img);
    }
    return amap;
}

} // namespace

RatMat weyl_cartan_matrix(const Superalgebra& g, const std::vector<int>& perm) {
    validate_perm(g, perm);
    auto amap = weyl_amap(g, perm);
    RatMat M(g.H, RatVec(g.H, Rat(0)));
    for (int j = 0; j < g.H; ++j)
        for (int t = 0; t < g.H; ++t) M[j][t] = amap[g.cartan_idx[j]][g.cartan_idx[t]];
    return M;
}

RField gauge_apply(const Superalgebra& g, const RField& r, const GaugeTransform& t) {
    RField out = r;
    switch (t.kind) {
        case GaugeTransform::Kind::TwoFormShift: {
            check_two_form(t.C, r.l_idx);
            out.terms = t_add(r.terms, cartan_tensor(g, t.C));
            return out;
        }
        case GaugeTransform::Kind::Translate: {
            if ((int)t.nu.size() != g.H)
                throw DomainError("translation vector must have one entry per Cartan coordinate");
            out.terms.clear();
            for (const auto& [key, v] : r.terms) out.terms[key] = shift_arg(v, t.nu);
            return out;
        }
        case GaugeTransform::Kind::WeylRotate: {
            validate_perm(g, t.perm);
            auto amap = weyl_amap(g, t.perm);
            RatMat M(g.H, RatVec(g.H, Rat(0)));
            for (int j = 0; j < g.H; ++j)
                for (int tt = 0; tt < g.H; ++tt)
                    M[j][tt] = amap[g.cartan_idx[j]][g.cartan_idx[tt]];
            std::set<int> lset(r.l_idx.begin(), r.l_idx.end());
            for (int j : r.l_idx)
                for (int tt = 0; tt < g.H; ++tt)
                    if (!lset.count(tt) && M[j][tt] != 0)
                        throw DomainError("rotation does not preserve the dynamical subspace");
            out.terms.clear();
            for (const auto& [key, v] : r.terms) {
                Expr v2 = linmap_arg(v, M);
                for (int a = 0; a < g.dim; ++a) {
                    const Rat& ca = amap[key.first][a];
                    if (ca == 0) continue;
                    for (int b = 0; b < g.dim; ++b) {
                        const Rat& cb = amap[key.second][b];
                        if (cb == 0) continue;
                        t_acc(out.terms, {a, b}, scale(ca * cb, v2));
                    }
                }
            }
            return out;
        }
    }
    throw DomainError("unknown gauge transform");  // unreachable
}

GaugeTransform gauge_inverse(const GaugeTransform& t) {
    GaugeTransform inv = t;
    switch (t.kind) {
        case GaugeTransform::Kind::TwoFormShift: {
            for (auto& row : inv.C.D)
                for (auto& e : row) e = neg(e);
            return inv;
        }
        case GaugeTransform::Kind::Translate: {
            for (auto& x : inv.nu) x = -x;
            return inv;
        }
        case GaugeTransform::Kind::WeylRotate: {
            std::vector<int> ip(t.perm.size());
            for (size_t a = 0; a < t.perm.size(); ++a) ip[t.perm[a]] = (int)a;
            inv.perm = ip;
            return inv;
        }
    }
    throw DomainError("unknown gauge transform");  // unreachable
}

} // namespace dynr
