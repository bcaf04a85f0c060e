#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dynr/errors.hpp"
#include "dynr/graded.hpp"
#include "dynr/superalg.hpp"

namespace dynr {

// A dynamical r-matrix: sparse coefficient tensor over the algebra basis,
// the Cartan coordinates the coefficients depend on, and metadata.
struct RField {
    std::string algebra;      // descriptor, e.g. "gl(2,1)"
    std::vector<int> l_idx;   // dynamical Cartan coordinates
    Tensor2 terms;
    std::string constructor;  // which family produced it
    Rat eps = Rat(0);         // coupling constant (0 for the rational family)
};

using RootSet = std::set<RootLabel>;
// Sign (+1 / -1) per positive root label: picks the constant-coefficient
// limit direction for root pairs outside the coth set. The two uniform
// choices are always admissible when X is spanned by simple roots; mixed
// per-pair choices are accepted but are only consistent when the induced
// polarization keeps the active roots closed under addition.
using BranchSigns = std::map<RootLabel, int>;
// Coefficients on Cartan-coordinate pairs (the block complementary to l).
using CartanBlock = std::map<std::pair<int, int>, Rat>;

// Subsets of the simple roots (by index 0..N-2) plus a bijection between them.
struct Triple {
    std::vector<int> g1, g2;
    std::map<int, int> tau;
};

// Lambda-dependent coefficient grid D over the Cartan coordinates,
// D[i][j] = -D[j][i], used for the h_i (x) h_j part of a field.
struct TwoForm {
    std::vector<std::vector<Expr>> D;
};

TwoForm zero_two_form(int H);
// Constant grid; antisymmetry checked exactly.
TwoForm const_two_form(const RatMat& D);
// Antisymmetry and closedness (d_k D_ij + d_i D_jk + d_j D_ki = 0 over the
// l coordinates) at sampled lambda; throws DomainError on violation.
void check_two_form(const TwoForm& D, const std::vector<int>& l_idx,
                    std::uint64_t seed = 7);

std::string label_str(const RootLabel& la);

// (alpha, lambda - nu) as an affine-linear function of the coordinates
// lambda_i = lambda(h_i), i in l_idx. nu, when given, is a full-length
// Cartan coordinate vector.
Expr root_pair_ast(const Superalgebra& g, const RootLabel& la,
                   const std::vector<int>& l_idx, const RatVec* nu = nullptr);

// First violation of closure under negation / root addition, if any.
std::optional<std::string> closure_violation(const Superalgebra& g, const RootSet& X);
void require_closed(const Superalgebra& g, const RootSet& X);

// All roots lying in the span of the given simple roots (always closed).
RootSet span_closure(const Superalgebra& g, const std::vector<int>& simple_subset);
RootSet full_root_set(const Superalgebra& g);

// sum_{i,j} D[i][j] h_i (x) h_j over the Cartan basis.
Tensor2 cartan_tensor(const Superalgebra& g, const TwoForm& D);

// Branch presets over the positive roots.
BranchSigns plus_branch(const Superalgebra& g);
BranchSigns minus_branch(const Superalgebra& g);
// The polarization matching the constant wedges of the triple-based family
// (-1 on even pairs, +1 on odd pairs).
BranchSigns canonical_branch(const Superalgebra& g);

// Zero-weight family with rational coefficients 1/(alpha, lambda - nu) on a
// closed root subset X; l = all of h.
RField zero_coupling_r(const Superalgebra& g, const RootSet& X, const TwoForm& D,
                       const RatVec* nu = nullptr);

// Zero-weight family with coupling constant eps: coth coefficients on X,
// constant branch-sign coefficients elsewhere; l = all of h.
RField nonzero_coupling_r(const Superalgebra& g, const RootSet& X, const TwoForm& D,
                          const RatVec* nu, const Rat& eps, const BranchSigns& branch);

// Independently coded non-graded (n = 0) oracle formulas.
RField classical_zero_coupling_r(const Superalgebra& g, const RootSet& X,
                                 const TwoForm& D, const RatVec* nu = nullptr);
RField classical_nonzero_coupling_r(const Superalgebra& g, const RootSet& X,
                                    const TwoForm& D, const RatVec* nu, const Rat& eps);

// Simple-root index interval {min(a,b), ..., max(a,b)-1} of a root label.
std::set<int> interval(const RootLabel& la);

// Bijection / parity / isometry checks; throws DomainError.
void validate_triple(const Superalgebra& g, const Triple& t);

// True iff the root spaces for Gamma_1 and their images carry equal l-weights.
bool l_graded(const Superalgebra& g, const std::vector<int>& l_idx, const Triple& t);

// Largest subset of Gamma_1 & Gamma_2 stable under tau and its inverse.
std::set<int> stable_core(const Triple& t);

// Extension of tau to the root vectors spanned by Gamma_1, through the
// bracket recursion on the fixed basis of matrix units.
class TwistExtension {
  public:
    TwistExtension(const Superalgebra& g, const Triple& t);
    // e_label -> coeff * e_result, for a positive label inside Gamma_1's span.
    std::pair<RootLabel, Rat> apply_once(const RootLabel& la);

  private:
    const Superalgebra& g_;
    std::set<int> g1_;
    std::map<int, int> tau_;
    std::map<RootLabel, std::pair<RootLabel, Rat>> cache_;
    SparseVec evec(const RootLabel& la) const;
    SparseVec brk(const SparseVec& u, const SparseVec& v) const;
    Rat ratio(const SparseVec& num, const SparseVec& den) const;
};

// K(lambda)(e_alpha) as (basis index, coefficient) pairs: the closed coth
// form on the stable core, otherwise 1/2 e_alpha plus the finite twist-orbit
// series with exponential coefficients.
std::vector<std::pair<int, Expr>> k_map(const Superalgebra& g, const Triple& t,
                                        const std::vector<int>& l_idx,
                                        const RootLabel& la);

// Cartan coordinates not in l_idx.
std::vector<int> complement_coords(const Superalgebra& g, const std::vector<int>& l_idx);

struct CartanBlockSolution {
    CartanBlock particular;                // minimal-norm
    std::vector<CartanBlock> homogeneous;  // basis of the solution space direction
    std::vector<int> h0;                   // coordinates the block lives on
};

// The coupling linear system for the Cartan-complement block, taken over all
// of Gamma_1 as stated:
//   (tau(a) (x) 1) r00 + (1 (x) a) r00 = 1/2 ((a + tau a) (x) 1) Omega00.
// Throws InfeasibleR00 naming the simple root whose constraint breaks it.
CartanBlockSolution solve_r00(const Superalgebra& g, const std::vector<int>& l_idx,
                              const Triple& t);

// The admissible set actually compatible with the Yang-Baxter identity:
// antisymmetric blocks satisfying the coupling equation for Gamma_1 minus the
// stable core only. (On gl there is additionally the central z (x) z line,
// exposed via central_pair_direction.)
CartanBlockSolution admissible_r00(const Superalgebra& g, const std::vector<int>& l_idx,
                                   const Triple& t);

// z (x) z over the complement coordinates for the central element z of gl,
// when z lies in their span; nullopt otherwise (and always for sl).
std::optional<CartanBlock> central_pair_direction(const Superalgebra& g,
                                                  const std::vector<int>& h0);

// Triple-based family: 1/2 Omega + r00 + K-wedges on the span of Gamma_1
// (coth closed form on the stable core) + 1/2-wedges on the remaining
// positive roots. r00 must lie in the admissible set.
RField triple_r(const Superalgebra& g, const std::vector<int>& l_idx, const Triple& t,
                const CartanBlock& r00);

} // namespace dynr
