#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "dynr/graded.hpp"
#include "dynr/rfield.hpp"

namespace dynr {

// Outcome of a sampled residual check. A check that could not evaluate a
// single sample point throws DomainError instead of reporting a vacuous pass.
struct ResidualReport {
    std::string check;
    double max_residual = 0.0;
    int n_requested = 0;
    int n_evaluated = 0;
    double tolerance = 0.0;
    bool pass = false;
    std::vector<double> per_sample;  // residual at each evaluated point
};

// Arguments of every reciprocal / coth in the field: its pole loci.
std::vector<Expr> pole_guards(const Tensor2& terms);

// Sample points in [-2,2]^H kept clear of the field's own pole set.
std::vector<std::vector<double>> field_samples(const Superalgebra& g,
                                               const Tensor2& terms, int n,
                                               std::uint64_t seed);

// Dynamical Yang-Baxter residual: max |Alt(dr) + [[r,r]]| over samples.
ResidualReport cdybe_residual(const Superalgebra& g, const RField& r,
                              int n_samples = 20, std::uint64_t seed = 1,
                              double tol = 1e-9);

// Non-dynamical Yang-Baxter residual |[[r,r]]| for a bare coefficient tensor.
ResidualReport cybe_residual(const Superalgebra& g, const Tensor2& terms,
                             int n_samples = 20, std::uint64_t seed = 1,
                             double tol = 1e-9);

// Generalized unitarity: r + s(r) - eps * Omega (s the graded flip).
ResidualReport unitarity_residual(const Superalgebra& g, const RField& r,
                                  const Rat& eps, int n_samples = 10,
                                  std::uint64_t seed = 1, double tol = 1e-12);

// Commutant condition [h_i (x) 1 + 1 (x) h_i, r] = 0 for the Cartan
// coordinates listed in subspace (indices into 0..H-1).
ResidualReport invariance_residual(const Superalgebra& g, const RField& r,
                                   const std::vector<int>& subspace,
                                   int n_samples = 10, std::uint64_t seed = 1,
                                   double tol = 1e-12);

// Components of r - s(r) with a leg on the dynamical Cartan coordinates.
ResidualReport l_skew_residual(const Superalgebra& g, const RField& r,
                               int n_samples = 10, std::uint64_t seed = 1,
                               double tol = 1e-12);

// Max coefficient difference |a - b| over the union of keys at sampled lambda.
ResidualReport field_difference(const Superalgebra& g, const RField& a,
                                const RField& b, int n_samples = 10,
                                std::uint64_t seed = 1, double tol = 1e-12);

// Gauge moves acting on fields.
struct GaugeTransform {
    enum class Kind { TwoFormShift, Translate, WeylRotate };
    Kind kind;
    TwoForm C;              // TwoFormShift: closed antisymmetric grid
    RatVec nu;              // Translate: lambda -> lambda - nu
    std::vector<int> perm;  // WeylRotate: parity-preserving vector-index map
};

GaugeTransform two_form_shift(const TwoForm& C);
GaugeTransform translate_by(const RatVec& nu);
GaugeTransform weyl_rotate(const std::vector<int>& perm);

// Apply the move; throws DomainError when the data is malformed (non-closed
// form, wrong-length shift, parity-breaking or l-breaking permutation).
RField gauge_apply(const Superalgebra& g, const RField& r, const GaugeTransform& t);

GaugeTransform gauge_inverse(const GaugeTransform& t);

// Cartan matrix M[j][t] of the rotation: coordinates of sigma(h_j) over h_t.
RatMat weyl_cartan_matrix(const Superalgebra& g, const std::vector<int>& perm);

} // namespace dynr
