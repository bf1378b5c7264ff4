// Kronecker-product algebra on lexicographically ordered coefficient vectors:
// power vectors, generalized Kronecker-sum application, symmetrization, and
// polynomial evaluation/gradients. All routines avoid materializing n^k x n^k
// operators or x^(x)k power vectors unless the caller explicitly asks for one.
#pragma once

#include "nlef/types.hpp"

namespace nlef {

// x (x) x (x) ... (x) x, k factors, lexicographic order. O(n^k) memory.
Vec kron_power(const Vec& x, int k);

// Symmetrize a degree-k coefficient vector over R^{n^k}: coefficients of each
// monomial orbit are summed and redistributed equally over the orbit, leaving
// the represented polynomial unchanged. Canonical grouping is by sorted
// multi-index, O(n^k * k log k).
Vec symmetrize(const Vec& c, int n, int k);

// Row-wise (C-order) vec and its inverse, consistent with the lexicographic
// index convention: vec_rm(X)(i*cols + j) = X(i, j).
inline Vec vec_rm(const Mat& X) {
  RowMat R = X;
  return Eigen::Map<const Vec>(R.data(), R.size());
}

inline Mat unvec_rm(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw InvalidArgument("unvec_rm: size mismatch");
  return Eigen::Map<const RowMat>(v.data(), rows, cols);
}

// L_d(M) v = sum_{s=1}^{d} (I (x) ... (x) M (x) ... (x) I) v with M in slot s.
// M is p x n (rectangular allowed, e.g. N' is n^2 x n); v has length n^d and
// the result has length p * n^{d-1}: each slot term is raveled C-order, so a
// p = n^2 block widens slot s into an adjacent index pair (s, s+1).
// Cost O(d * p * n^d) arithmetic; no n^k x n^k matrix is ever formed.
Vec kron_sum_apply(const Mat& M, const Vec& v, int d);

// c' x^(x)k by k successive last-axis contractions. O(n^{k-1}) extra memory.
double contract_full(const Vec& c, int n, int k, const Vec& x);

// mat(c; n x n^{k-1}) * x^(x)(k-1) via k-1 last-axis contractions.
Vec contract_to_vector(const Vec& c, int n, int k, const Vec& x);

// E(x) = 1/2 sum_k c_k' x^(x)k.
double poly_eval(const EnergyCoefficients& ec, const Vec& x);

// grad E(x) = 1/2 sum_k k * mat(c_k; n x n^{k-1}) x^(x)(k-1).
// Requires symmetric coefficients for the result to be the true gradient.
Vec poly_gradient(const EnergyCoefficients& ec, const Vec& x);

}  // namespace nlef
