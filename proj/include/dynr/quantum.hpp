#pragma once
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dynr/rfield.hpp"
#include "dynr/verify.hpp"

namespace dynr {

// Dense row-major double matrix, sized for operators on small tensor powers
// of the vector representation.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;
    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a((std::size_t)r * c, 0.0) {}
    double& operator()(int i, int j) { return a[(std::size_t)i * cols + j]; }
    double operator()(int i, int j) const { return a[(std::size_t)i * cols + j]; }
};

Mat mat_id(int n);
Mat mat_mul(const Mat& A, const Mat& B);
Mat mat_add(const Mat& A, const Mat& B);
Mat mat_sub(const Mat& A, const Mat& B);
Mat mat_scale(double c, const Mat& A);
double mat_maxabs(const Mat& A);

// A (possibly lambda-dependent) two-slot operator on V (x) V.
using RFun = std::function<Mat(const std::vector<double>&)>;

RFun const_R(const Mat& M2);

// Basis matrices of the vector representation as doubles.
std::vector<Mat> rep_mats(const Superalgebra& g);

// Weight vectors of the vector representation: mu[c][i] = h_i eigenvalue on v_c.
std::vector<std::vector<double>> vec_weights(const Superalgebra& g);

// Matrix of sum coeff_ij a_i (x) a_j on V (x) V at lambda, with the Koszul
// column sign from evaluating the second (odd) leg past an odd first column.
Mat rho2(const Superalgebra& g, const Tensor2& terms, const std::vector<double>& lam);

// Graded flip v_c (x) v_d -> (-1)^{|c||d|} v_d (x) v_c.
Mat ps_mat(const Superalgebra& g);

// Embed a two-slot operator into slots (s1, s2) of V^(x)3, s1 < s2 in
// {(1,2), (2,3), (1,3)}; the (1,3) case conjugates by the graded flip so
// crossing the middle slot carries its Koszul sign.
Mat embed(const Superalgebra& g, const Mat& M2, int s1, int s2);

// Quantum dynamical Yang-Baxter residual with step gamma at the given lambda
// points: max |R12(l - g h3) R13(l) R23(l - g h1) - R23(l) R13(l - g h2) R12(l)|.
// Weight shifts are resolved blockwise over the spectator slot.
ResidualReport qdybe_residual(const Superalgebra& g, const RFun& R, double gamma,
                              const std::vector<std::vector<double>>& lams,
                              double tol = 1e-12);

// Id - gamma * rho2(r): the first-order quantization of a classical field.
RFun r_to_R(const Superalgebra& g, const RField& r, double gamma);

// Zero-weight template R = sum E_aa(x)E_aa + sum_{a!=b} alpha[a][b] E_aa(x)E_bb
// + sum_{a!=b} beta[a][b] E_ab(x)E_ba. alpha, beta are N x N.
Mat template_R(const Superalgebra& g, const Mat& alpha, const Mat& beta);

// [R, h(x)1 + 1(x)h] = 0 for every Cartan h.
bool is_zero_weight(const Superalgebra& g, const Mat& R, double tol = 1e-12);

// One weight block of the flip-composed operator T = P_s R.
struct HeckeBlock {
    std::string kind;  // "diag" (v_a (x) v_a line) or "mixed" (2x2)
    int a = 0, b = 0;
    std::vector<std::complex<double>> eigenvalues;
    std::vector<double> expected;
    bool ok = false;
};

struct HeckeReport {
    bool ok = false;
    std::vector<HeckeBlock> blocks;
};

// Structured check that T = P_s R satisfies (T - 1)(T + (-1)^{|a||b|} q) = 0
// blockwise: eigenvalue 1 on diagonal lines, {1, -(-1)^{|a||b|} q} on mixed
// blocks, no leakage across blocks. Throws DomainError unless R is zero-weight.
HeckeReport hecke_check(const Superalgebra& g, const Mat& R, double q,
                        double tol = 1e-9);

// Log-log fit of the qdybe residual against the step.
struct SlopeReport {
    std::vector<double> gammas;
    std::vector<double> residuals;
    double raw_slope = 0.0;         // fit of log res vs log gamma
    double normalized_slope = 0.0;  // fit of log(res/gamma) vs log gamma
    double intercept = 0.0;         // of the normalized fit
    bool inconclusive = false;      // residuals at the noise floor
};

// Quantize r at several steps and fit the residual decay. The first-order
// quantization of a solution leaves a residual O(gamma^3): normalized slope
// ~2 (raw ~3); a perturbed non-solution decays one order slower (~1 / ~2).
SlopeReport semiclassical_slope(const Superalgebra& g, const RField& r,
                                int n_lams = 3, std::uint64_t seed = 5,
                                std::vector<double> gammas = {1e-2, 5e-3, 2.5e-3});

} // namespace dynr
