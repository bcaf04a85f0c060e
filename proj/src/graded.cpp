#include "dynr/graded.hpp"

namespace dynr {

void t_acc(Tensor2& T, std::pair<int, int> key, const Expr& v) {
    if (is_zero(v)) return;
    auto it = T.find(key);
    if (it == T.end()) {
        T.emplace(key, v);
        return;
    }
    it->second = add(it->second, v);
    if (is_zero(it->second)) T.erase(it);
}

void t_acc3(Tensor3& T, std::array<int, 3> key, const Expr& v) {
    if (is_zero(v)) return;
    auto it = T.find(key);
    if (it == T.end()) {
        T.emplace(key, v);
        return;
    }
    it->second = add(it->second, v);
    if (is_zero(it->second)) T.erase(it);
}

Tensor2 t_add(const Tensor2& A, const Tensor2& B) {
    Tensor2 R = A;
    for (const auto& [k, v] : B) t_acc(R, k, v);
    return R;
}

Tensor3 t_add3(const Tensor3& A, const Tensor3& B) {
    Tensor3 R = A;
    for (const auto& [k, v] : B) t_acc3(R, k, v);
    return R;
}

Tensor2 t_scale(const Rat& c, const Tensor2& A) {
    Tensor2 R;
    for (const auto& [k, v] : A) t_acc(R, k, scale(c, v));
    return R;
}

Tensor2 super_twist(const Tensor2& A, const Superalgebra& g) {
    Tensor2 R;
    for (const auto& [k, v] : A) {
        auto [i, j] = k;
        Rat s = (g.parity[i] && g.parity[j]) ? Rat(-1) : Rat(1);
        t_acc(R, {j, i}, scale(s, v));
    }
    return R;
}

void wedge_acc(Tensor2& T, int i, int j, const Expr& coeff, const Superalgebra& g) {
    t_acc(T, {i, j}, coeff);
    Rat s = (g.parity[i] && g.parity[j]) ? Rat(-1) : Rat(1);
    t_acc(T, {j, i}, scale(-s, coeff));
}

Tensor3 alt_s(const Tensor3& T, const Superalgebra& g) {
    Tensor3 R;
    for (const auto& [k, v] : T) {
        int a = k[0], b = k[1], c = k[2];
        int pa = g.parity[a], pb = g.parity[b], pc = g.parity[c];
        t_acc3(R, {a, b, c}, v);
        Rat s1 = (pa && ((pb + pc) % 2)) ? Rat(-1) : Rat(1);
        t_acc3(R, {b, c, a}, scale(s1, v));
        Rat s2 = (pc && ((pa + pb) % 2)) ? Rat(-1) : Rat(1);
        t_acc3(R, {c, a, b}, scale(s2, v));
    }
    return R;
}

Tensor3 yb_bracket(const Tensor2& r, const Tensor2& s, const Superalgebra& g) {
    Tensor3 p;
    for (const auto& [rk, cv] : r) {
        auto [x, xp] = rk;
        for (const auto& [sk, dv] : s) {
            auto [y, yp] = sk;
            Expr cd = mul(cv, dv);
            if (is_zero(cd)) continue;
            // Koszul sign from commuting the second leg of r past the first leg of s.
            Rat sgn = (g.parity[xp] && g.parity[y]) ? Rat(-1) : Rat(1);
            for (const auto& [k, c] : g.bracket(x, y))
                t_acc3(p, {k, xp, yp}, scale(sgn * c, cd));  // [r12, s13]
            for (const auto& [k, c] : g.bracket(xp, y))
                t_acc3(p, {x, k, yp}, scale(c, cd));         // [r12, s23]
            for (const auto& [k, c] : g.bracket(xp, yp))
                t_acc3(p, {x, y, k}, scale(sgn * c, cd));    // [r13, s23]
        }
    }
    return p;
}

Tensor3 alt_s_dr(const Tensor2& r, const std::vector<int>& l_idx, const Superalgebra& g) {
    Tensor3 dr;
    for (const auto& [k, v] : r) {
        auto [a, b] = k;
        for (int i : l_idx) {
            Expr d = differentiate(v, i);
            if (is_zero(d)) continue;
            t_acc3(dr, {g.cartan_idx[i], a, b}, d);
        }
    }
    return alt_s(dr, g);
}

Tensor3 dybe_tensor(const Tensor2& r, const std::vector<int>& l_idx, const Superalgebra& g) {
    return t_add3(alt_s_dr(r, l_idx, g), yb_bracket(r, r, g));
}

Tensor2 adjoint2(int x_idx, const Tensor2& T, const Superalgebra& g) {
    Tensor2 out;
    int px = g.parity[x_idx];
    for (const auto& [k, v] : T) {
        auto [a, b] = k;
        for (const auto& [t, c] : g.bracket(x_idx, a)) t_acc(out, {t, b}, scale(c, v));
        Rat s = (px && g.parity[a]) ? Rat(-1) : Rat(1);
        for (const auto& [t, c] : g.bracket(x_idx, b)) t_acc(out, {a, t}, scale(s * c, v));
    }
    return out;
}

double t_maxabs(const Tensor2& T, const std::vector<double>& lam) {
    double m = 0.0;
    for (const auto& [k, v] : T) m = std::max(m, std::abs(evaluate(v, lam)));
    return m;
}

double t_maxabs3(const Tensor3& T, const std::vector<double>& lam) {
    double m = 0.0;
    for (const auto& [k, v] : T) m = std::max(m, std::abs(evaluate(v, lam)));
    return m;
}

} // namespace dynr
