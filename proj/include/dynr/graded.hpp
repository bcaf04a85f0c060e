#pragma once
#include <array>
#include <map>
#include <utility>
#include <vector>

#include "dynr/lambdafn.hpp"
#include "dynr/superalg.hpp"

namespace dynr {

// Sparse tensors over the algebra basis with lambda-dependent coefficients.
using Tensor2 = std::map<std::pair<int, int>, Expr>;
using Tensor3 = std::map<std::array<int, 3>, Expr>;

// Accumulate v into T[key], dropping keys whose coefficient folds to zero.
void t_acc(Tensor2& T, std::pair<int, int> key, const Expr& v);
void t_acc3(Tensor3& T, std::array<int, 3> key, const Expr& v);

Tensor2 t_add(const Tensor2& A, const Tensor2& B);
Tensor3 t_add3(const Tensor3& A, const Tensor3& B);
Tensor2 t_scale(const Rat& c, const Tensor2& A);

// a (x) b -> (-1)^{|a||b|} b (x) a, extended linearly.
Tensor2 super_twist(const Tensor2& A, const Superalgebra& g);

// a wedge b = a (x) b - (-1)^{|a||b|} b (x) a, accumulated into T.
void wedge_acc(Tensor2& T, int i, int j, const Expr& coeff, const Superalgebra& g);

// Signed cyclic symmetrization:
// a(x)b(x)c + (-1)^{|a|(|b|+|c|)} b(x)c(x)a + (-1)^{|c|(|a|+|b|)} c(x)a(x)b.
Tensor3 alt_s(const Tensor3& T, const Superalgebra& g);

// [r12, s13] + [r12, s23] + [r13, s23] with Koszul signs from moving legs
// past each other; products of algebra elements resolved through the bracket.
Tensor3 yb_bracket(const Tensor2& r, const Tensor2& s, const Superalgebra& g);

// Alt_s of dr, where dr = sum_{i in l} h_i (x) dr/d lambda_i.
Tensor3 alt_s_dr(const Tensor2& r, const std::vector<int>& l_idx, const Superalgebra& g);

// Alt_s(dr) + yb_bracket(r, r): the tensor whose vanishing is the dynamical
// Yang-Baxter identity for r.
Tensor3 dybe_tensor(const Tensor2& r, const std::vector<int>& l_idx, const Superalgebra& g);

// Super adjoint action of basis element x on a 2-tensor:
// x.(a(x)b) = [x,a](x)b + (-1)^{|x||a|} a(x)[x,b].
Tensor2 adjoint2(int x_idx, const Tensor2& T, const Superalgebra& g);

// Max |coefficient| over the tensor at a given lambda (propagates PoleProximity).
double t_maxabs(const Tensor2& T, const std::vector<double>& lam);
double t_maxabs3(const Tensor3& T, const std::vector<double>& lam);

} // namespace dynr
