#include "dynr/superalg.hpp"

#include <stdexcept>

namespace dynr {

Superalgebra::Superalgebra(AlgKind kind_, int m_, int n_) : kind(kind_), m(m_), n(n_) {
    if (m < 1 || n < 0) throw DomainError("need m >= 1, n >= 0");
    N = m + n;
    vparity.assign(N, 0);
    for (int a = m; a < N; ++a) vparity[a] = 1;

    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            if (a == b) continue;
            RatMat M = rzeros(N, N);
            M[a][b] = 1;
            basis.push_back(std::move(M));
            parity.push_back((vparity[a] + vparity[b]) % 2);
            names.push_back("E" + std::to_string(a) + std::to_string(b));
        }
    off_count = (int)basis.size();

    std::vector<RatMat> cart;
    for (int i = 0; i + 1 < N; ++i) {
        RatMat M = rzeros(N, N);
        M[i][i] = vparity[i] ? Rat(-1) : Rat(1);
        M[i + 1][i + 1] = vparity[i + 1] ? Rat(1) : Rat(-1);
        cart.push_back(std::move(M));  // coroot of eps_i - eps_{i+1}
    }
    if (kind == AlgKind::gl) {
        RatMat M = rzeros(N, N);
        M[0][0] = 1;
        cart.push_back(std::move(M));
    }
    for (size_t i = 0; i < cart.size(); ++i) {
        cartan_idx.push_back((int)basis.size());
        basis.push_back(cart[i]);
        parity.push_back(0);
        names.push_back("H" + std::to_string(i));
    }
    dim = (int)basis.size();
    H = (int)cart.size();

    gram = rzeros(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) gram[i][j] = str_form(basis[i], basis[j]);
    gram_h = rzeros(H, H);
    for (int i = 0; i < H; ++i)
        for (int j = 0; j < H; ++j) gram_h[i][j] = gram[cartan_idx[i]][cartan_idx[j]];
    try {
        gram_inv = rmatinv(gram);
        gram_h_inv = rmatinv(gram_h);
        degenerate = false;
    } catch (const DomainError&) {
        gram_inv.clear();
        gram_h_inv.clear();
        degenerate = true;
    }

    // Roots, normalizations, coroots.
    RatMat diag_system(N, RatVec(H));
    for (int c = 0; c < N; ++c)
        for (int j = 0; j < H; ++j) diag_system[c][j] = basis[cartan_idx[j]][c][c];
    int k = 0;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            if (a == b) continue;
            Root rt;
            rt.label = {a, b};
            rt.vec.resize(H);
            for (int j = 0; j < H; ++j)
                rt.vec[j] = basis[cartan_idx[j]][a][a] - basis[cartan_idx[j]][b][b];
            rt.parity = (vparity[a] + vparity[b]) % 2;
            rt.evec = k;
            rt.positive = a < b;
            root_index[rt.label] = (int)roots.size();
            // e_alpha = E_ab for a < b; e_{-alpha} = (-1)^{|b|} E_ab for a > b,
            // so that (e_alpha, e_{-alpha}) = 1.
            root_coef[rt.label] = (a < b) ? Rat(1) : (vparity[b] ? Rat(-1) : Rat(1));
            // t_alpha has the same diagonal profile as the simple coroots.
            RatVec tdiag(N, Rat(0));
            tdiag[a] = vparity[a] ? Rat(-1) : Rat(1);
            tdiag[b] = vparity[b] ? Rat(1) : Rat(-1);
            auto x = solve_exact(diag_system, tdiag);
            if (!x) throw DomainError("coroot outside Cartan span");
            coroot_coords[rt.label] = *x;
            roots.push_back(std::move(rt));
            ++k;
        }
}

Rat Superalgebra::strace(const RatMat& M) const {
    Rat s = 0;
    for (int a = 0; a < N; ++a) s += (vparity[a] ? Rat(-1) : Rat(1)) * M[a][a];
    return s;
}

Rat Superalgebra::str_form(const RatMat& X, const RatMat& Y) const {
    return strace(rmatmul(X, Y));
}

RatVec Superalgebra::coords(const RatMat& M) const {
    RatVec v(dim, Rat(0));
    int k = 0;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            if (a != b) v[k++] = M[a][b];
    RatMat A(N, RatVec(H));
    RatVec diag(N);
    for (int c = 0; c < N; ++c) {
        for (int j = 0; j < H; ++j) A[c][j] = basis[cartan_idx[j]][c][c];
        diag[c] = M[c][c];
    }
    auto x = solve_exact(A, diag);
    if (!x) throw DomainError("matrix not in the algebra");
    for (int j = 0; j < H; ++j) v[cartan_idx[j]] = (*x)[j];
    return v;
}

const SparseVec& Superalgebra::bracket(int i, int j) const {
    auto key = std::make_pair(i, j);
    auto it = bracket_cache_.find(key);
    if (it != bracket_cache_.end()) return it->second;
    const RatMat& X = basis[i];
    const RatMat& Y = basis[j];
    Rat sgn = (parity[i] && parity[j]) ? Rat(-1) : Rat(1);
    RatMat M = rmatsub(rmatmul(X, Y), rmatscale(sgn, rmatmul(Y, X)));
    RatVec v = coords(M);
    SparseVec out;
    for (int t = 0; t < dim; ++t)
        if (v[t] != 0) out[t] = v[t];
    return bracket_cache_.emplace(key, std::move(out)).first->second;
}

Rat Superalgebra::form_pair_roots(const RootLabel& la, const RootLabel& lb) const {
    const RatVec& t = coroot_coords.at(la);
    const RatVec& bv = root(lb).vec;
    Rat s = 0;
    for (int j = 0; j < H; ++j) s += t[j] * bv[j];
    return s;
}

Rat Superalgebra::evec_pair_form(const RootLabel& la) const {
    auto [a, b] = la;
    Rat ca = root_coef.at({a, b});
    Rat cb = root_coef.at({b, a});
    int i1 = root({a, b}).evec;
    int i2 = root({b, a}).evec;
    return ca * cb * gram[i1][i2];
}

Rat Superalgebra::A_alpha(const RootLabel& la) const {
    Rat s = root(la).parity ? Rat(-1) : Rat(1);
    return s * evec_pair_form(la);
}

SparseTensor2 Superalgebra::casimir() const {
    if (degenerate) throw DomainError("invariant 2-tensor needs a nondegenerate form");
    SparseTensor2 t;
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
            if (gram_inv[j][k] != 0) t[{j, k}] = gram_inv[j][k];
    return t;
}

SparseTensor2 Superalgebra::casimir_block_complement(const std::vector<int>& l_idx) const {
    if (degenerate) throw DomainError("invariant 2-tensor needs a nondegenerate form");
    std::vector<bool> in_l(H, false);
    for (int i : l_idx) in_l[i] = true;
    SparseTensor2 t;
    for (int i = 0; i < H; ++i)
        for (int j = 0; j < H; ++j) {
            if (in_l[i] || in_l[j]) continue;
            // Gram inverse of the Cartan block, transposed index order to
            // match the left-dual convention of casimir().
            if (gram_h_inv[j][i] != 0) t[{i, j}] = gram_h_inv[j][i];
        }
    return t;
}

RatMat Superalgebra::dual_basis() const {
    if (degenerate) throw DomainError("dual basis needs a nondegenerate form");
    // a^j = sum_k c_{jk} a_k with (a_i, a^j) = delta_ij  =>  c_{jk} = (G^{-1})_{kj}.
    RatMat c = rzeros(dim, dim);
    for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) c[j][k] = gram_inv[k][j];
    return c;
}

RatVec Superalgebra::pair_weight_lambda(const RatVec& mu_evals, const std::vector<int>& l_idx) const {
    int L = (int)l_idx.size();
    RatMat Gl(L, RatVec(L));
    RatVec mul(L);
    for (int i = 0; i < L; ++i) {
        for (int j = 0; j < L; ++j) Gl[i][j] = gram_h[l_idx[i]][l_idx[j]];
        mul[i] = mu_evals[l_idx[i]];
    }
    auto w = solve_exact(Gl, mul);
    if (!w) throw DomainError("form degenerate on the dynamical subspace");
    RatVec full(H, Rat(0));
    for (int k = 0; k < L; ++k) full[l_idx[k]] = (*w)[k];
    return full;
}

Rat Superalgebra::pair_weights(const RatVec& mu_evals, const RatVec& nu_evals) const {
    auto t = solve_exact(gram_h, mu_evals);
    if (!t) throw DomainError("form degenerate on the Cartan");
    Rat s = 0;
    for (int j = 0; j < H; ++j) s += (*t)[j] * nu_evals[j];
    return s;
}

RatVec Superalgebra::vector_weight(int c) const {
    RatVec w(H);
    for (int i = 0; i < H; ++i) w[i] = basis[cartan_idx[i]][c][c];
    return w;
}

Superalgebra build_algebra(AlgKind kind, int m, int n) { return Superalgebra(kind, m, n); }

std::string alg_name(const Superalgebra& g) {
    std::string base = g.kind == AlgKind::gl ? "gl" : "sl";
    if (g.n == 0) return base + "(" + std::to_string(g.m) + ")";
    return base + "(" + std::to_string(g.m) + "," + std::to_string(g.n) + ")";
}

} // namespace dynr
