#pragma once
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dynr/errors.hpp"

namespace dynr {

using Rat = boost::multiprecision::cpp_rational;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

inline Rat rat(long num, long den = 1) { return Rat(num, den); }

inline double to_double(const Rat& x) { return static_cast<double>(x); }

inline RatMat rzeros(int rows, int cols) {
    return RatMat(rows, RatVec(cols, Rat(0)));
}

inline RatMat reye(int n) {
    RatMat I = rzeros(n, n);
    for (int i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

inline RatMat rmatmul(const RatMat& A, const RatMat& B) {
    int n = (int)A.size(), k = (int)B.size(), m = k ? (int)B[0].size() : 0;
    RatMat C = rzeros(n, m);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < k; ++t) {
            const Rat& a = A[i][t];
            if (a == 0) continue;
            for (int j = 0; j < m; ++j)
                if (B[t][j] != 0) C[i][j] += a * B[t][j];
        }
    return C;
}

inline RatMat rmatsub(const RatMat& A, const RatMat& B) {
    RatMat C = A;
    for (size_t i = 0; i < C.size(); ++i)
        for (size_t j = 0; j < C[i].size(); ++j) C[i][j] -= B[i][j];
    return C;
}

inline RatMat rmatscale(const Rat& c, const RatMat& A) {
    RatMat C = A;
    for (auto& row : C)
        for (auto& x : row) x *= c;
    return C;
}

// Reduced row echelon form; returns pivot column list.
inline std::vector<int> rref_inplace(RatMat& M) {
    int rows = (int)M.size();
    int cols = rows ? (int)M[0].size() : 0;
    std::vector<int> piv;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int pr = -1;
        for (int i = r; i < rows; ++i)
            if (M[i][c] != 0) { pr = i; break; }
        if (pr < 0) continue;
        std::swap(M[r], M[pr]);
        Rat pv = M[r][c];
        for (auto& x : M[r]) x /= pv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || M[i][c] == 0) continue;
            Rat f = M[i][c];
            for (int j = 0; j < cols; ++j) M[i][j] -= f * M[r][j];
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

// One exact solution of A x = b with free variables set to 0, or nullopt.
inline std::optional<RatVec> solve_exact(const RatMat& A, const RatVec& b) {
    if (A.empty()) return RatVec{};
    int rows = (int)A.size(), n = (int)A[0].size();
    RatMat M(rows, RatVec(n + 1));
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < n; ++j) M[i][j] = A[i][j];
        M[i][n] = b[i];
    }
    auto piv = rref_inplace(M);
    for (const auto& row : M) {
        bool allz = true;
        for (int j = 0; j < n; ++j)
            if (row[j] != 0) { allz = false; break; }
        if (allz && row[n] != 0) return std::nullopt;
    }
    RatVec x(n, Rat(0));
    for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = M[i][n];
    return x;
}

// Basis of the kernel of A.
inline std::vector<RatVec> nullspace(const RatMat& A) {
    if (A.empty()) return {};
    RatMat M = A;
    auto piv = rref_inplace(M);
    int n = (int)A[0].size();
    std::vector<bool> ispiv(n, false);
    for (int c : piv) ispiv[c] = true;
    std::vector<RatVec> out;
    for (int f = 0; f < n; ++f) {
        if (ispiv[f]) continue;
        RatVec v(n, Rat(0));
        v[f] = 1;
        for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -M[i][f];
        out.push_back(std::move(v));
    }
    return out;
}

inline RatMat rmatinv(const RatMat& A) {
    int n = (int)A.size();
    RatMat aug(n, RatVec(2 * n, Rat(0)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug[i][j] = A[i][j];
        aug[i][n + i] = 1;
    }
    auto piv = rref_inplace(aug);
    for (int i = 0; i < n; ++i)
        if (i >= (int)piv.size() || piv[i] != i)
            throw DomainError("matrix is singular");
    RatMat inv(n, RatVec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

} // namespace dynr
