#include "dynr/rfield.hpp"

#include <algorithm>
#include <numeric>

namespace dynr {

namespace {

void require_nondegenerate(const Superalgebra& g) {
    if (g.degenerate)
        throw DomainError("the invariant form of " + alg_name(g) +
                          " is degenerate; no dual tensor exists");
}

void validate_l(const Superalgebra& g, const std::vector<int>& l_idx) {
    std::set<int> seen;
    for (int i : l_idx) {
        if (i < 0 || i >= g.H)
            throw DomainError("dynamical coordinate index out of range");
        if (!seen.insert(i).second)
            throw DomainError("duplicate dynamical coordinate index");
    }
}

// e_alpha (x) e_{-alpha} as a single basis key plus normalization.
std::pair<std::pair<int, int>, Rat> root_pair_key(const Superalgebra& g,
                                                  const RootLabel& la) {
    RootLabel rev{la.second, la.first};
    Rat c = g.root_coef.at(la) * g.root_coef.at(rev);
    return {{g.root(la).evec, g.root(rev).evec}, c};
}

std::vector<int> iota_l(int H) {
    std::vector<int> v(H);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

bool subset_of(const std::set<int>& sub, const std::set<int>& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

} // namespace

std::string label_str(const RootLabel& la) {
    return "(" + std::to_string(la.first) + "," + std::to_string(la.second) + ")";
}

TwoForm zero_two_form(int H) {
    TwoForm tf;
    tf.D.assign(H, std::vector<Expr>(H, cst(Rat(0))));
    return tf;
}

TwoForm const_two_form(const RatMat& D) {
    int H = (int)D.size();
    TwoForm tf;
    tf.D.assign(H, std::vector<Expr>(H));
    for (int i = 0; i < H; ++i) {
        if ((int)D[i].size() != H)
            throw DomainError("two-form grid must be square");
        for (int j = 0; j < H; ++j) {
            if (D[i][j] != -D[j][i])
                throw DomainError("two-form grid is not antisymmetric at (" +
                                  std::to_string(i) + "," + std::to_string(j) + ")");
            tf.D[i][j] = cst(D[i][j]);
        }
    }
    return tf;
}

void check_two_form(const TwoForm& D, const std::vector<int>& l_idx,
                    std::uint64_t seed) {
    int H = (int)D.D.size();
    bool all_const = true;
    for (int i = 0; i < H; ++i) {
        if ((int)D.D[i].size() != H)
            throw DomainError("two-form grid must be square");
        for (int j = 0; j < H; ++j) {
            if (!D.D[i][j])
                throw DomainError("two-form grid has an empty entry");
            if (!is_const(D.D[i][j])) all_const = false;
        }
    }
    if (all_const) {
        for (int i = 0; i < H; ++i)
            for (int j = 0; j < H; ++j)
                if (D.D[i][j]->c != -D.D[j][i]->c)
                    throw DomainError("two-form grid is not antisymmetric at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
        return;
    }
    // Lambda-dependent grid: check antisymmetry and closedness numerically.
    std::map<std::pair<int, int>, std::vector<Expr>> deriv;
    for (int i = 0; i < H; ++i)
        for (int j = 0; j < H; ++j) {
            std::vector<Expr> dk;
            for (int k : l_idx) dk.push_back(differentiate(D.D[i][j], k));
            deriv[{i, j}] = std::move(dk);
        }
    std::mt19937_64 rng(seed);
    int evaluated = 0;
    for (int attempt = 0; attempt < 64 && evaluated < 4; ++attempt) {
        std::vector<double> lam(H);
        for (auto& x : lam) x = uniform_sample(rng);
        try {
            for (int i = 0; i < H; ++i)
                for (int j = 0; j < H; ++j) {
                    double s = evaluate(D.D[i][j], lam) + evaluate(D.D[j][i], lam);
                    if (std::abs(s) > 1e-12)
                        throw DomainError("two-form grid is not antisymmetric at (" +
                                          std::to_string(i) + "," + std::to_string(j) + ")");
                }
            int L = (int)l_idx.size();
            for (int a = 0; a < L; ++a)
                for (int b = 0; b < L; ++b)
                    for (int c = 0; c < L; ++c) {
                        int i = l_idx[a], j = l_idx[b], k = l_idx[c];
                        double s = evaluate(deriv.at({i, j})[c], lam) +
                                   evaluate(deriv.at({j, k})[a], lam) +
                                   evaluate(deriv.at({k, i})[b], lam);
                        if (std::abs(s) > 1e-12)
                            throw DomainError("two-form grid is not closed");
                    }
            ++evaluated;
        } catch (const PoleProximity&) {
            continue;
        }
    }
    if (evaluated == 0)
        throw DomainError("two-form grid could not be evaluated at any sample");
}

Expr root_pair_ast(const Superalgebra& g, const RootLabel& la,
                   const std::vector<int>& l_idx, const RatVec* nu) {
    RatVec w = g.pair_weight_lambda(g.root(la).vec, l_idx);
    Rat b(0);
    if (nu) {
        if ((int)nu->size() != g.H)
            throw DomainError("nu must have one entry per Cartan coordinate");
        for (int i : l_idx) b -= w[i] * (*nu)[i];
    }
    return lin(w, b);
}

std::optional<std::string> closure_violation(const Superalgebra& g, const RootSet& X) {
    std::map<RatVec, RootLabel> v2l;
    for (const auto& rt : g.roots) v2l[rt.vec] = rt.label;
    for (const auto& la : X) {
        if (!g.root_index.count(la))
            return "label " + label_str(la) + " is not a root";
        RootLabel rev{la.second, la.first};
        if (!X.count(rev))
            return "root " + label_str(la) + ": negation " + label_str(rev) +
                   " is missing from the subset";
        for (const auto& lb : X) {
            const RatVec& va = g.root(la).vec;
            const RatVec& vb = g.root(lb).vec;
            RatVec s(va.size());
            for (size_t k = 0; k < s.size(); ++k) s[k] = va[k] + vb[k];
            auto it = v2l.find(s);
            if (it != v2l.end() && !X.count(it->second))
                return "roots " + label_str(la) + " + " + label_str(lb) + ": sum " +
                       label_str(it->second) + " is missing from the subset";
        }
    }
    return std::nullopt;
}

void require_closed(const Superalgebra& g, const RootSet& X) {
    if (auto bad = closure_violation(g, X))
        throw InvalidRootSubset(*bad);
}

RootSet span_closure(const Superalgebra& g, const std::vector<int>& simple_subset) {
    std::set<int> S;
    for (int i : simple_subset) {
        if (i < 0 || i >= g.N - 1)
            throw DomainError("simple-root index out of range");
        S.insert(i);
    }
    RootSet X;
    for (const auto& rt : g.roots)
        if (subset_of(interval(rt.label), S)) X.insert(rt.label);
    return X;
}

RootSet full_root_set(const Superalgebra& g) {
    RootSet X;
    for (const auto& rt : g.roots) X.insert(rt.label);
    return X;
}

Tensor2 cartan_tensor(const Superalgebra& g, const TwoForm& D) {
    if ((int)D.D.size() != g.H)
        throw DomainError("two-form grid must be H x H");
    Tensor2 r;
    for (int i = 0; i < g.H; ++i) {
        if ((int)D.D[i].size() != g.H)
            throw DomainError("two-form grid must be H x H");
        for (int j = 0; j < g.H; ++j) {
            if (!D.D[i][j]) throw DomainError("two-form grid has an empty entry");
            t_acc(r, {g.cartan_idx[i], g.cartan_idx[j]}, D.D[i][j]);
        }
    }
    return r;
}

BranchSigns plus_branch(const Superalgebra& g) {
    BranchSigns b;
    for (const auto& rt : g.roots)
        if (rt.positive) b[rt.label] = 1;
    return b;
}

BranchSigns minus_branch(const Superalgebra& g) {
    BranchSigns b;
    for (const auto& rt : g.roots)
        if (rt.positive) b[rt.label] = -1;
    return b;
}

BranchSigns canonical_branch(const Superalgebra& g) {
    BranchSigns b;
    for (const auto& rt : g.roots)
        if (rt.positive) b[rt.label] = rt.parity ? 1 : -1;
    return b;
}

RField zero_coupling_r(const Superalgebra& g, const RootSet& X, const TwoForm& D,
                       const RatVec* nu) {
    require_nondegenerate(g);
    require_closed(g, X);
    std::vector<int> l_idx = iota_l(g.H);
    check_two_form(D, l_idx);
    Tensor2 r = cartan_tensor(g, D);
    for (const auto& la : X) {
        auto [key, cnorm] = root_pair_key(g, la);
        int p = g.root(la).parity;
        Rat c0 = (p ? Rat(-1) : Rat(1)) * g.evec_pair_form(la) * cnorm;
        t_acc(r, key, scale(c0, recip_of(root_pair_ast(g, la, l_idx, nu))));
    }
    return RField{alg_name(g), l_idx, std::move(r), "zero_coupling", Rat(0)};
}

RField nonzero_coupling_r(const Superalgebra& g, const RootSet& X, const TwoForm& D,
                          const RatVec* nu, const Rat& eps, const BranchSigns& branch) {
    require_nondegenerate(g);
    if (eps == 0)
        throw DomainError("coupling constant is zero; use zero_coupling_r");
    require_closed(g, X);
    std::vector<int> l_idx = iota_l(g.H);
    check_two_form(D, l_idx);
    Tensor2 r = cartan_tensor(g, D);
    for (const auto& [key, v] : g.casimir()) t_acc(r, key, cst(v * eps / 2));
    for (const auto& rt : g.roots) {
        const RootLabel& la = rt.label;
        auto [key, cnorm] = root_pair_key(g, la);
        Expr phi;
        if (X.count(la)) {
            Expr aarg = scale(g.A_alpha(la) * eps / 2, root_pair_ast(g, la, l_idx, nu));
            phi = scale(eps / 2, coth_of(aarg));
        } else {
            RootLabel pos_la = rt.positive ? la : RootLabel{la.second, la.first};
            auto it = branch.find(pos_la);
            if (it == branch.end())
                throw DomainError("missing branch sign for positive root " +
                                  label_str(pos_la));
            if (it->second != 1 && it->second != -1)
                throw DomainError("branch signs must be +1 or -1");
            Rat s(it->second);
            if (rt.positive)
                phi = cst(-s * (rt.parity ? Rat(-1) : Rat(1)) * eps / 2);
            else
                phi = cst(s * eps / 2);
        }
        t_acc(r, key, scale(cnorm, phi));
    }
    return RField{alg_name(g), l_idx, std::move(r), "nonzero_coupling", eps};
}

RField classical_zero_coupling_r(const Superalgebra& g, const RootSet& X,
                                 const TwoForm& D, const RatVec* nu) {
    require_nondegenerate(g);
    if (g.n != 0)
        throw DomainError("the non-graded oracle requires n = 0");
    std::vector<int> l_idx = iota_l(g.H);
    Tensor2 r = cartan_tensor(g, D);
    for (const auto& la : X) {
        auto [key, cnorm] = root_pair_key(g, la);
        t_acc(r, key, scale(cnorm, recip_of(root_pair_ast(g, la, l_idx, nu))));
    }
    return RField{alg_name(g), l_idx, std::move(r), "classical_zero_coupling", Rat(0)};
}

RField classical_nonzero_coupling_r(const Superalgebra& g, const RootSet& X,
                                    const TwoForm& D, const RatVec* nu, const Rat& eps) {
    require_nondegenerate(g);
    if (g.n != 0)
        throw DomainError("the non-graded oracle requires n = 0");
    std::vector<int> l_idx = iota_l(g.H);
    Tensor2 r = cartan_tensor(g, D);
    for (const auto& [key, v] : g.casimir()) t_acc(r, key, cst(v * eps / 2));
    for (const auto& rt : g.roots) {
        const RootLabel& la = rt.label;
        auto [key, cnorm] = root_pair_key(g, la);
        Expr phi;
        if (X.count(la))
            phi = scale(eps / 2, coth_of(scale(eps / 2, root_pair_ast(g, la, l_idx, nu))));
        else if (rt.positive)
            phi = cst(eps / 2);
        else
            phi = cst(-eps / 2);
        t_acc(r, key, scale(cnorm, phi));
    }
    return RField{alg_name(g), l_idx, std::move(r), "classical_nonzero_coupling", eps};
}

std::set<int> interval(const RootLabel& la) {
    int a = std::min(la.first, la.second), b = std::max(la.first, la.second);
    std::set<int> s;
    for (int i = a; i < b; ++i) s.insert(i);
    return s;
}

void validate_triple(const Superalgebra& g, const Triple& t) {
    int nsimple = g.N - 1;
    for (int i : t.g1)
        if (i < 0 || i >= nsimple) throw DomainError("simple-root index out of range");
    for (int i : t.g2)
        if (i < 0 || i >= nsimple) throw DomainError("simple-root index out of range");
    std::set<int> s1(t.g1.begin(), t.g1.end()), s2(t.g2.begin(), t.g2.end());
    if (s1.size() != t.g1.size() || s2.size() != t.g2.size())
        throw DomainError("duplicate simple-root index in a triple subset");
    std::set<int> keys, vals;
    for (const auto& [k, v] : t.tau) {
        keys.insert(k);
        vals.insert(v);
    }
    if (keys != s1 || vals != s2 || t.g1.size() != t.g2.size())
        throw DomainError("tau is not a bijection between the two subsets");
    auto simple = [](int i) { return RootLabel{i, i + 1}; };
    for (int i : t.g1) {
        if (g.root(simple(t.tau.at(i))).parity != g.root(simple(i)).parity)
            throw DomainError("tau does not preserve the grading");
        for (int j : t.g1)
            if (g.form_pair_roots(simple(i), simple(j)) !=
                g.form_pair_roots(simple(t.tau.at(i)), simple(t.tau.at(j))))
                throw DomainError("tau is not an isometry");
    }
}

bool l_graded(const Superalgebra& g, const std::vector<int>& l_idx, const Triple& t) {
    for (int i : t.g1) {
        const RatVec& va = g.root({i, i + 1}).vec;
        const RatVec& vb = g.root({t.tau.at(i), t.tau.at(i) + 1}).vec;
        for (int k : l_idx)
            if (va[k] != vb[k]) return false;
    }
    return true;
}

std::set<int> stable_core(const Triple& t) {
    std::set<int> S;
    std::set<int> s2(t.g2.begin(), t.g2.end());
    for (int i : t.g1)
        if (s2.count(i)) S.insert(i);
    std::map<int, int> inv;
    for (const auto& [k, v] : t.tau) inv[v] = k;
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = S.begin(); it != S.end();) {
            int a = *it;
            bool bad = !t.tau.count(a) || !S.count(t.tau.at(a)) || !inv.count(a) ||
                       !S.count(inv.at(a));
            if (bad) {
                it = S.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }
    return S;
}

TwistExtension::TwistExtension(const Superalgebra& g, const Triple& t)
    : g_(g), g1_(t.g1.begin(), t.g1.end()), tau_(t.tau) {}

SparseVec TwistExtension::evec(const RootLabel& la) const {
    return SparseVec{{g_.root(la).evec, g_.root_coef.at(la)}};
}

SparseVec TwistExtension::brk(const SparseVec& u, const SparseVec& v) const {
    SparseVec out;
    for (const auto& [i, ci] : u)
        for (const auto& [j, cj] : v)
            for (const auto& [k, ck] : g_.bracket(i, j)) out[k] += ci * cj * ck;
    for (auto it = out.begin(); it != out.end();)
        it = (it->second == 0) ? out.erase(it) : std::next(it);
    return out;
}

Rat TwistExtension::ratio(const SparseVec& num, const SparseVec& den) const {
    if (num.size() != 1 || den.size() != 1 ||
        num.begin()->first != den.begin()->first)
        throw DomainError("bracket landed on an unexpected root vector");
    return num.begin()->second / den.begin()->second;
}

std::pair<RootLabel, Rat> TwistExtension::apply_once(const RootLabel& la) {
    auto hit = cache_.find(la);
    if (hit != cache_.end()) return hit->second;
    int a = la.first, b = la.second;
    if (!(a < b)) throw DomainError("the twist extension expects a positive root");
    std::set<int> iv = interval(la);
    if (!subset_of(iv, g1_))
        throw DomainError("root " + label_str(la) +
                          " is outside the span of the first subset");
    std::vector<int> img;
    for (int i : iv) img.push_back(tau_.at(i));
    std::sort(img.begin(), img.end());
    for (size_t k = 0; k < img.size(); ++k)
        if (img[k] != img[0] + (int)k)
            throw Unsupported("tau image of the root interval is not an interval");
    RootLabel nl{img.front(), img.back() + 1};
    std::pair<RootLabel, Rat> out;
    if (b - a == 1) {
        out = {{tau_.at(a), tau_.at(a) + 1}, Rat(1)};
    } else {
        RootLabel head{a, a + 1}, rest{a + 1, b};
        Rat c = ratio(evec(la), brk(evec(head), evec(rest)));
        auto [h2, c2] = apply_once(head);
        auto [r2, c3] = apply_once(rest);
        SparseVec br2 = brk(evec(h2), evec(r2));
        Rat c4 = ratio(br2, evec(nl));
        out = {nl, c * c2 * c3 * c4};
    }
    cache_[la] = out;
    return out;
}

namespace {

struct KParts {
    std::vector<std::pair<int, Expr>> comps;
    int orbit_terms = 0;
    bool coth_form = false;
};

KParts k_components(const Superalgebra& g, TwistExtension& tb,
                    const std::set<int>& g1set, const std::set<int>& G3,
                    const std::vector<int>& l_idx, const RootLabel& la) {
    KParts out;
    std::set<int> iv = interval(la);
    Expr pair = root_pair_ast(g, la, l_idx);
    Rat cpos = g.root_coef.at(la);
    if (subset_of(iv, G3)) {
        auto [lb, cf] = tb.apply_once(la);
        if (lb != la || cf != 1)
            throw DomainError("twist does not fix the stable-core root " + label_str(la));
        Expr co = scale(Rat(1, 2), coth_of(scale(g.A_alpha(la) / 2, pair)));
        out.comps.push_back({g.root(la).evec, scale(cpos, co)});
        out.coth_form = true;
        return out;
    }
    out.comps.push_back({g.root(la).evec, cst(cpos / 2)});
    RootLabel cur = la;
    Rat cc(1);
    int n = 0;
    Rat A = g.A_alpha(la);
    while (subset_of(interval(cur), g1set)) {
        auto [nxt, step] = tb.apply_once(cur);
        cur = nxt;
        cc *= step;
        ++n;
        if (n > 60) throw Unsupported("non-terminating twist orbit");
        Expr co = mul(cst(cc), exp_of(scale(Rat(-n) * A, pair)));
        out.comps.push_back({g.root(cur).evec, scale(g.root_coef.at(cur), co)});
    }
    out.orbit_terms = n;
    return out;
}

// Whether the functional with the given Cartan evaluations is realized by an
// element of the span of the l-coroots.
bool dual_in_l_span(const Superalgebra& g, const RatVec& vec,
                    const std::vector<int>& l_idx) {
    RatVec w = g.pair_weight_lambda(vec, l_idx);
    for (int k = 0; k < g.H; ++k) {
        Rat acc(0);
        for (int j = 0; j < g.H; ++j) acc += g.gram_h[k][j] * w[j];
        if (acc != vec[k]) return false;
    }
    return true;
}

struct BlockSystem {
    std::vector<int> h0;
    std::vector<std::pair<int, int>> varis;
    std::map<std::pair<int, int>, int> pos;
    RatMat A;
    RatVec rhs;
};

BlockSystem block_base(const Superalgebra& g, const std::vector<int>& l_idx) {
    BlockSystem s;
    s.h0 = complement_coords(g, l_idx);
    for (int i : s.h0)
        for (int j : s.h0) {
            s.pos[{i, j}] = (int)s.varis.size();
            s.varis.push_back({i, j});
        }
    return s;
}

void add_antisym_rows(BlockSystem& s) {
    int n = (int)s.h0.size();
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            RatVec row(s.varis.size(), Rat(0));
            row[s.pos.at({s.h0[a], s.h0[b]})] += 1;
            row[s.pos.at({s.h0[b], s.h0[a]})] += 1;
            s.A.push_back(std::move(row));
            s.rhs.push_back(Rat(0));
        }
}

void add_coupling_rows(BlockSystem& s, const Superalgebra& g,
                       const std::vector<int>& l_idx, const Triple& t,
                       const std::set<int>* skip) {
    SparseTensor2 om00 = g.casimir_block_complement(l_idx);
    for (int gi : t.g1) {
        if (skip && skip->count(gi)) continue;
        const RatVec& av = g.root({gi, gi + 1}).vec;
        const RatVec& tv = g.root({t.tau.at(gi), t.tau.at(gi) + 1}).vec;
        for (int tt : s.h0) {
            RatVec row(s.varis.size(), Rat(0));
            Rat b(0);
            for (int i : s.h0) {
                row[s.pos.at({i, tt})] += tv[i];
                row[s.pos.at({tt, i})] += av[i];
                auto it = om00.find({i, tt});
                if (it != om00.end()) b += it->second * (av[i] + tv[i]) / 2;
            }
            s.A.push_back(std::move(row));
            s.rhs.push_back(b);
        }
    }
}

Rat dot(const RatVec& u, const RatVec& v) {
    Rat s(0);
    for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

RatVec min_norm(RatVec part, const std::vector<RatVec>& null) {
    if (null.empty()) return part;
    int k = (int)null.size();
    RatMat G(k, RatVec(k));
    RatVec c(k);
    for (int i = 0; i < k; ++i) {
        c[i] = dot(null[i], part);
        for (int j = 0; j < k; ++j) G[i][j] = dot(null[i], null[j]);
    }
    auto x = solve_exact(G, c);
    if (!x) return part;  // independent basis: cannot happen
    for (int i = 0; i < k; ++i)
        for (size_t j = 0; j < part.size(); ++j) part[j] -= (*x)[i] * null[i][j];
    return part;
}

CartanBlock to_block(const RatVec& v, const std::vector<std::pair<int, int>>& varis) {
    CartanBlock out;
    for (size_t k = 0; k < varis.size(); ++k)
        if (v[k] != 0) out[varis[k]] = v[k];
    return out;
}

CartanBlockSolution finish_solution(const BlockSystem& s, const RatVec& part,
                                    const std::vector<RatVec>& null) {
    CartanBlockSolution sol;
    sol.particular = to_block(min_norm(part, null), s.varis);
    for (const auto& v : null) sol.homogeneous.push_back(to_block(v, s.varis));
    sol.h0 = s.h0;
    return sol;
}

} // namespace

std::vector<std::pair<int, Expr>> k_map(const Superalgebra& g, const Triple& t,
                                        const std::vector<int>& l_idx,
                                        const RootLabel& la) {
    require_nondegenerate(g);
    validate_l(g, l_idx);
    validate_triple(g, t);
    if (la.first >= la.second)
        throw DomainError("k_map expects a positive root label");
    std::set<int> g1set(t.g1.begin(), t.g1.end());
    std::set<int> iv = interval(la);
    if (!subset_of(iv, g1set))
        throw DomainError("root " + label_str(la) +
                          " is outside the span of the first subset");
    std::set<int> G3 = stable_core(t);
    if (subset_of(iv, G3))
        for (int i : G3)
            if (t.tau.at(i) != i)
                throw Unsupported("tau is not the identity on the stable core");
    TwistExtension tb(g, t);
    return k_components(g, tb, g1set, G3, l_idx, la).comps;
}

std::vector<int> complement_coords(const Superalgebra& g, const std::vector<int>& l_idx) {
    std::set<int> l(l_idx.begin(), l_idx.end());
    std::vector<int> h0;
    for (int i = 0; i < g.H; ++i)
        if (!l.count(i)) h0.push_back(i);
    return h0;
}

CartanBlockSolution solve_r00(const Superalgebra& g, const std::vector<int>& l_idx,
                              const Triple& t) {
    require_nondegenerate(g);
    validate_l(g, l_idx);
    validate_triple(g, t);
    if (!l_graded(g, l_idx, t)) throw DomainError("triple is not l-graded");
    BlockSystem s = block_base(g, l_idx);
    add_coupling_rows(s, g, l_idx, t, nullptr);
    int nvar = (int)s.varis.size();
    if (s.A.empty()) {
        RatVec part(nvar, Rat(0));
        std::vector<RatVec> null;
        for (int i = 0; i < nvar; ++i) {
            RatVec v(nvar, Rat(0));
            v[i] = 1;
            null.push_back(std::move(v));
        }
        return finish_solution(s, part, null);
    }
    auto part = solve_exact(s.A, s.rhs);
    if (!part) {
        // identify the first simple root whose constraint block breaks it
        int per = (int)s.h0.size();
        for (size_t k = 1; k <= t.g1.size(); ++k) {
            RatMat Ak(s.A.begin(), s.A.begin() + k * per);
            RatVec bk(s.rhs.begin(), s.rhs.begin() + k * per);
            if (!solve_exact(Ak, bk))
                throw InfeasibleR00(
                    "coupling system for the complement block is infeasible; the "
                    "constraint for simple root index " +
                    std::to_string(t.g1[k - 1]) + " breaks it");
        }
        throw InfeasibleR00("coupling system for the complement block is infeasible");
    }
    return finish_solution(s, *part, nullspace(s.A));
}

CartanBlockSolution admissible_r00(const Superalgebra& g, const std::vector<int>& l_idx,
                                   const Triple& t) {
    require_nondegenerate(g);
    validate_l(g, l_idx);
    validate_triple(g, t);
    if (!l_graded(g, l_idx, t)) throw DomainError("triple is not l-graded");
    std::set<int> G3 = stable_core(t);
    BlockSystem s = block_base(g, l_idx);
    add_antisym_rows(s);
    add_coupling_rows(s, g, l_idx, t, &G3);
    int nvar = (int)s.varis.size();
    if (s.A.empty())
        return finish_solution(s, RatVec(nvar, Rat(0)), {});
    auto part = solve_exact(s.A, s.rhs);
    if (!part) throw InfeasibleR00("the admissible set for this triple is empty");
    return finish_solution(s, *part, nullspace(s.A));
}

std::optional<CartanBlock> central_pair_direction(const Superalgebra& g,
                                                  const std::vector<int>& h0) {
    if (g.kind != AlgKind::gl) return std::nullopt;
    RatVec z = g.coords(reye(g.N));
    RatVec zc(g.H);
    for (int k = 0; k < g.H; ++k) zc[k] = z[g.cartan_idx[k]];
    std::set<int> h0set(h0.begin(), h0.end());
    for (int k = 0; k < g.H; ++k)
        if (!h0set.count(k) && zc[k] != 0) return std::nullopt;
    CartanBlock out;
    for (int i : h0)
        for (int j : h0)
            if (zc[i] * zc[j] != 0) out[{i, j}] = zc[i] * zc[j];
    return out;
}

RField triple_r(const Superalgebra& g, const std::vector<int>& l_idx, const Triple& t,
                const CartanBlock& r00) {
    require_nondegenerate(g);
    validate_l(g, l_idx);
    validate_triple(g, t);
    if (!l_graded(g, l_idx, t)) throw DomainError("triple is not l-graded");
    std::set<int> G3 = stable_core(t);
    for (int i : G3)
        if (t.tau.at(i) != i)
            throw Unsupported("tau is not the identity on the stable core");

    // Admissibility of the complement block (with the central z (x) z freedom
    // on gl): required for the output to satisfy the dynamical identity.
    BlockSystem s = block_base(g, l_idx);
    add_antisym_rows(s);
    add_coupling_rows(s, g, l_idx, t, &G3);
    RatVec vec(s.varis.size(), Rat(0));
    for (const auto& [ij, v] : r00) {
        auto it = s.pos.find(ij);
        if (it == s.pos.end())
            throw InfeasibleR00("block entry (" + std::to_string(ij.first) + "," +
                                std::to_string(ij.second) +
                                ") lies outside the complement coordinates");
        vec[it->second] = v;
    }
    RatVec resid(s.A.size());
    bool ok = true;
    for (size_t i = 0; i < s.A.size(); ++i) {
        resid[i] = dot(s.A[i], vec) - s.rhs[i];
        if (resid[i] != 0) ok = false;
    }
    if (!ok) {
        if (auto zz = central_pair_direction(g, s.h0)) {
            RatVec zv(s.varis.size(), Rat(0));
            for (const auto& [ij, v] : *zz) zv[s.pos.at(ij)] = v;
            RatVec az(s.A.size());
            int piv = -1;
            for (size_t i = 0; i < s.A.size(); ++i) {
                az[i] = dot(s.A[i], zv);
                if (piv < 0 && az[i] != 0) piv = (int)i;
            }
            if (piv >= 0) {
                Rat c = resid[piv] / az[piv];
                ok = true;
                for (size_t i = 0; i < s.A.size(); ++i)
                    if (resid[i] != c * az[i]) {
                        ok = false;
                        break;
                    }
            }
        }
        if (!ok)
            throw InfeasibleR00(
                "the given complement block is not in the admissible set for this triple");
    }

    Tensor2 r;
    for (const auto& [key, v] : g.casimir()) t_acc(r, key, cst(v / 2));
    for (const auto& [ij, v] : r00)
        t_acc(r, {g.cartan_idx[ij.first], g.cartan_idx[ij.second]}, cst(v));

    TwistExtension tb(g, t);
    std::set<int> g1set(t.g1.begin(), t.g1.end());
    for (const auto& rt : g.roots) {
        if (!rt.positive) continue;
        const RootLabel& la = rt.label;
        RootLabel rev{la.second, la.first};
        int key_neg = g.root(rev).evec;
        Rat cneg = g.root_coef.at(rev);
        std::set<int> iv = interval(la);
        if (subset_of(iv, g1set)) {
            Expr pair = root_pair_ast(g, la, l_idx);
            KParts kp = k_components(g, tb, g1set, G3, l_idx, la);
            if (kp.coth_form) {
                if (is_const(pair))
                    throw DomainError("root " + label_str(la) +
                                      " pairs trivially with the dynamical "
                                      "coordinates: its coth coefficient is "
                                      "identically singular");
                if (rt.parity && !dual_in_l_span(g, rt.vec, l_idx))
                    throw DomainError("odd stable-core root " + label_str(la) +
                                      ": its coroot leaves the span of the "
                                      "dynamical coordinates, so the identity "
                                      "cannot close");
            } else if (kp.orbit_terms > 0 && !is_const(pair)) {
                throw DomainError("twist-orbit coefficients for root " + label_str(la) +
                                  " depend on lambda; orbit roots must pair "
                                  "trivially with the dynamical coordinates");
            }
            for (const auto& [bi, ce] : kp.comps)
                wedge_acc(r, bi, key_neg, scale(cneg, ce), g);
        } else {
            wedge_acc(r, rt.evec, key_neg,
                      cst(g.root_coef.at(la) * cneg / 2), g);
        }
    }
    return RField{alg_name(g), l_idx, std::move(r), "triple", Rat(1)};
}

} // namespace dynr
