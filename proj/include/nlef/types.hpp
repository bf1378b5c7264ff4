// Core types shared across the library: dense-matrix aliases, error hierarchy,
// the quadratic control-affine system (A, N, B, C), and polynomial energy
// coefficient containers.
//
// Convention used throughout: coefficient vectors of degree k live in R^{n^k}
// in *lexicographic Kronecker order* (row-major multi-index, last index
// fastest), i.e. entry (i_1,...,i_k) sits at position sum_j (i_j-1) n^{k-j}
// (1-based), matching MATLAB/NumPy kron(). Under this order
//   (A' (x) I + I (x) A') vec(X) = vec(A'X + XA)
// where vec() ravels row-wise.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlef {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
// Row-major view type used for matricizations of C-ordered coefficient data.
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CRowMat =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// Caller passed inconsistent dimensions or out-of-domain parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed (non-convergence, residual out of tolerance).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Riccati/Lyapunov equation has no admissible (stabilizing) solution for the
// requested parameters.
class SolvabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A diagonal block of a shifted Kronecker-sum system is numerically singular.
// Carries the offending (1-based) leading multi-index and its scalar shift.
class SingularSystemError : public NumericalError {
 public:
  SingularSystemError(const std::string& msg, std::vector<int> multi_index,
                      std::complex<double> shift)
      : NumericalError(msg), multi_index(std::move(multi_index)), shift(shift) {}
  std::vector<int> multi_index;
  std::complex<double> shift;
};

// ---------------------------------------------------------------------------
// Energy coefficients
// ---------------------------------------------------------------------------

enum class EnergyKind : int { Past = 0, Future = 1 };

// Degree-d polynomial energy function E(x) = 1/2 sum_{k=2}^{d} c_k' x^(x)k
// with symmetric coefficient vectors c_k in lexicographic order.
struct EnergyCoefficients {
  int n = 0;                  // state dimension
  int d = 0;                  // maximum degree (>= 2)
  double eta = 0.0;           // eta = 1 - gamma^{-2}
  EnergyKind kind = EnergyKind::Future;
  std::map<int, Vec> coeffs;  // degree k in [2, d] -> vector of length n^k

  const Vec& coeff(int k) const {
    auto it = coeffs.find(k);
    if (it == coeffs.end())
      throw InvalidArgument("EnergyCoefficients: no coefficient of degree " + std::to_string(k));
    return it->second;
  }
};

// ---------------------------------------------------------------------------
// Quadratic control-affine system
// ---------------------------------------------------------------------------

// x' = A x + N (x (x) x) + B u,  y = C x, with N : n x n^2 and row-symmetric
// quadratic coefficients (N(x (x) y) == N(y (x) x)).
struct PolySystem {
  int n = 0, m = 0, p = 0;
  Mat A;  // n x n
  Mat N;  // n x n^2, rows in lexicographic pair order
  Mat B;  // n x m
  Mat C;  // p x n

  void validate() const {
    if (n <= 0 || m <= 0 || p <= 0) throw InvalidArgument("PolySystem: nonpositive dimension");
    if (A.rows() != n || A.cols() != n) throw InvalidArgument("PolySystem: A must be n x n");
    if (N.rows() != n || N.cols() != static_cast<Eigen::Index>(n) * n)
      throw InvalidArgument("PolySystem: N must be n x n^2");
    if (B.rows() != n || B.cols() != m) throw InvalidArgument("PolySystem: B must be n x m");
    if (C.rows() != p || C.cols() != n) throw InvalidArgument("PolySystem: C must be p x n");
  }
};

// n^k as a 64-bit size with overflow guard (tensor sizes grow fast).
inline std::int64_t ipow(std::int64_t n, int k) {
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) {
    if (n != 0 && r > (static_cast<std::int64_t>(1) << 62) / n)
      throw InvalidArgument("ipow: n^k overflows 63-bit range");
    r *= n;
  }
  return r;
}

}  // namespace nlef
