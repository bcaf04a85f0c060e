#pragma once
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dynr/rational.hpp"

namespace dynr {

enum class AlgKind { gl, sl };

// A root label is the ordered pair (a,b) of vector-space indices of the
// matrix unit E_ab spanning the root space; positive means a < b.
using RootLabel = std::pair<int, int>;

struct Root {
    RootLabel label;     // (a, b)
    RatVec vec;          // values of the root on the Cartan basis h_0..h_{H-1}
    int parity = 0;      // 0 even, 1 odd
    int evec = -1;       // basis index of the matrix unit E_ab
    bool positive = false;
};

// Sparse element of the algebra in basis coordinates.
using SparseVec = std::map<int, Rat>;
// Sparse 2-tensor over the basis (constant coefficients).
using SparseTensor2 = std::map<std::pair<int, int>, Rat>;

// gl(m,n) or sl(m,n), represented on V = C^{m|n} with the first m vector
// indices even and the last n odd. Basis order: all off-diagonal matrix
// units E_ab (row-major, a != b), then the Cartan basis: the coroots of the
// distinguished simple roots eps_i - eps_{i+1}, plus the matrix unit E_00
// completing the Cartan for gl. The bilinear form is the supertrace form
// str(XY); dual bases and the invariant 2-tensor come from its Gram inverse.
class Superalgebra {
  public:
    Superalgebra(AlgKind kind, int m, int n);

    AlgKind kind;
    int m = 0, n = 0;
    int N = 0;             // m + n
    int dim = 0;           // basis size
    int H = 0;             // Cartan dimension
    int off_count = 0;     // number of off-diagonal basis elements
    bool degenerate = false;  // true iff the form is singular (m == n for sl)

    std::vector<int> vparity;         // parity of the vector-rep basis
    std::vector<RatMat> basis;        // basis matrices, N x N
    std::vector<int> parity;          // parity per basis element
    std::vector<std::string> names;   // "E{a}{b}" / "H{i}"
    std::vector<int> cartan_idx;      // basis indices of the Cartan part

    RatMat gram, gram_h;              // str-form Gram matrices (full, Cartan)
    RatMat gram_inv, gram_h_inv;      // empty when degenerate

    std::vector<Root> roots;
    std::map<RootLabel, int> root_index;       // label -> index into roots
    std::map<RootLabel, Rat> root_coef;        // normalization of e_{+-alpha}
    std::map<RootLabel, RatVec> coroot_coords; // t_alpha over the Cartan basis

    Rat strace(const RatMat& M) const;
    Rat str_form(const RatMat& X, const RatMat& Y) const;

    // Coordinates of an algebra element over the basis (throws if outside).
    RatVec coords(const RatMat& M) const;

    // Supercommutator [basis_i, basis_j] in sparse basis coordinates; cached.
    const SparseVec& bracket(int i, int j) const;

    const Root& root(const RootLabel& la) const { return roots[root_index.at(la)]; }

    // (alpha, beta) computed as beta(t_alpha).
    Rat form_pair_roots(const RootLabel& la, const RootLabel& lb) const;

    // (e_alpha, e_{-alpha}) with the normalized root vectors.
    Rat evec_pair_form(const RootLabel& la) const;

    // Per-root normalization scalar (-1)^{|alpha|} (e_alpha, e_{-alpha}).
    Rat A_alpha(const RootLabel& la) const;

    // Invariant 2-tensor dual to the form: sum_{j,k} (G^{-1})_{jk} a_j (x) a_k.
    SparseTensor2 casimir() const;

    // Block of the invariant 2-tensor spanned by the Cartan coordinates NOT
    // in l_idx (the complement subspace h0); keys are Cartan coordinates.
    SparseTensor2 casimir_block_complement(const std::vector<int>& l_idx) const;

    // Dual basis coefficients: a^j = sum_k dual[j][k] a_k, so (a_i, a^j) = delta_ij.
    RatMat dual_basis() const;

    // The linear form (mu, .) restricted to l, expressed in the coordinates
    // lambda_i = lambda(h_i), i in l_idx; returned as a full-length weight
    // vector (zero outside l). mu is given by its Cartan evaluation vector.
    RatVec pair_weight_lambda(const RatVec& mu_evals, const std::vector<int>& l_idx) const;

    // (mu, nu) for two functionals given by Cartan evaluation vectors.
    Rat pair_weights(const RatVec& mu_evals, const RatVec& nu_evals) const;

    // Weight of vector-rep basis vector c: its evaluation vector on the Cartan basis.
    RatVec vector_weight(int c) const;

  private:
    mutable std::map<std::pair<int, int>, SparseVec> bracket_cache_;
};

Superalgebra build_algebra(AlgKind kind, int m, int n);
std::string alg_name(const Superalgebra& g);

} // namespace dynr
