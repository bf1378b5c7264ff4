#include "nlef/tensor_solver.hpp"

#include <Eigen/Eigenvalues>

#include <complex>
#include <sstream>
#include <utility>
#include <vector>

namespace nlef {

namespace {

template <typename Scalar>
using DMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using DRowMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Apply Uop to every slot of a C-ordered k-tensor (Uop already carries any
// conjugation). Slot s splits the index as (lead, n, trail) with
// lead = n^s, trail = n^{k-1-s}; the slot multiply is a gemm per lead block.
template <typename Scalar>
DVec<Scalar> mode_multiply_all(const DMat<Scalar>& Uop, int k, const DVec<Scalar>& b) {
  const int n = static_cast<int>(Uop.rows());
  const std::int64_t len = ipow(n, k);
  DVec<Scalar> src = b, dst(len);
  for (int s = 0; s < k; ++s) {
    const std::int64_t trail = ipow(n, k - 1 - s);
    if (trail == 1) {
      // last slot: one gemm on the (n^{k-1} x n) matricization
      Eigen::Map<const DRowMat<Scalar>> view(src.data(), len / n, n);
      Eigen::Map<DRowMat<Scalar>> out(dst.data(), len / n, n);
      out.noalias() = view * Uop.transpose();
    } else {
      const std::int64_t lead = ipow(n, s);
      for (std::int64_t a = 0; a < lead; ++a) {
        Eigen::Map<const DRowMat<Scalar>> block(src.data() + a * n * trail, n, trail);
        Eigen::Map<DRowMat<Scalar>> out(dst.data() + a * n * trail, n, trail);
        out.noalias() = Uop * block;
      }
    }
    std::swap(src, dst);
  }
  return src;
}

// Solve (W) z = y in place for W upper Hessenberg (row-major work copy,
// overwritten). Givens QR: eliminate the subdiagonal, then back-substitute.
// Returns false when the diagonal condition estimate exceeds cond_tol.
template <typename Scalar>
bool hessenberg_solve(DRowMat<Scalar>& W, DVec<Scalar>& y, double cond_tol) {
  const Eigen::Index n = W.rows();
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> tmp(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const Scalar a = W(i, i);
    const Scalar b = W(i + 1, i);
    const double t = std::sqrt(std::norm(a) + std::norm(b));
    if (t == 0.0) continue;  // column already zero; caught by the diag check
    const Scalar ca = Eigen::numext::conj(a) / t;
    const Scalar cb = Eigen::numext::conj(b) / t;
    const Scalar da = a / t;
    const Scalar db = b / t;
    const Eigen::Index m = n - i;
    // unitary rotation [[conj(a), conj(b)], [-b, a]] / t on rows i, i+1
    tmp.head(m) = W.row(i).tail(m);
    W.row(i).tail(m) = ca * tmp.head(m) + cb * W.row(i + 1).tail(m);
    W.row(i + 1).tail(m) = -db * tmp.head(m) + da * W.row(i + 1).tail(m);
    const Scalar yi = y(i);
    y(i) = ca * yi + cb * y(i + 1);
    y(i + 1) = -db * yi + da * y(i + 1);
  }
  double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = std::abs(W(i, i));
    dmax = std::max(dmax, d);
    dmin = std::min(dmin, d);
  }
  if (dmin <= dmax / cond_tol || dmax == 0.0) return false;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    Scalar acc = y(i);
    if (i + 1 < n) acc -= (W.row(i).tail(n - 1 - i) * y.tail(n - 1 - i)).value();
    y(i) = acc / W(i, i);
  }
  return true;
}

constexpr double kCondTol = 1e12;

[[noreturn]] void throw_singular(const std::vector<int>& digits, std::complex<double> shift) {
  std::vector<int> one_based(digits.size());
  std::ostringstream msg;
  msg << "solve_shifted_kron_system: singular diagonal block at leading multi-index (";
  for (std::size_t i = 0; i < digits.size(); ++i) {
    one_based[i] = digits[i] + 1;
    msg << one_based[i] << (i + 1 < digits.size() ? "," : "");
  }
  msg << "), shift " << shift.real();
  if (shift.imag() != 0.0) msg << (shift.imag() < 0 ? "" : "+") << shift.imag() << "i";
  throw SingularSystemError(msg.str(), std::move(one_based), shift);
}

// Decode the leading multi-index (k-1 digits, last fastest) of block J.
void decode_digits(std::int64_t J, int n, std::vector<int>& digits) {
  for (int s = static_cast<int>(digits.size()) - 1; s >= 0; --s) {
    digits[s] = static_cast<int>(J % n);
    J /= n;
  }
}

// All-real path for symmetric A: A = Q diag(lambda) Q' with Q orthogonal, so
// the triangular couplings between blocks vanish and every block is the same
// matrix diag(lambda) + Q'MQ under a real scalar shift.
Vec solve_real_symmetric(const ShiftedKronSystem& sys) {
  const int n = static_cast<int>(sys.A.rows());
  const int k = sys.k;
  Eigen::SelfAdjointEigenSolver<Mat> es(sys.A);
  if (es.info() != Eigen::Success)
    throw NumericalError("solve_shifted_kron_system: symmetric eigendecomposition failed");
  const Vec lambda = es.eigenvalues();
  const Mat Q = es.eigenvectors();
  const bool has_shift = sys.M.size() > 0;

  Vec bt = mode_multiply_all<double>(Q.transpose(), k, sys.b);

  const std::int64_t nblocks = ipow(n, k - 1);
  std::vector<int> digits(k - 1);
  Vec xt(bt.size());

  if (!has_shift) {
    // pure Kronecker sum: fully diagonal in the eigenbasis
    for (std::int64_t J = 0; J < nblocks; ++J) {
      decode_digits(J, n, digits);
      double sigma = 0.0;
      for (int d : digits) sigma += lambda(d);
      double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        const double d = std::abs(sigma + lambda(i));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
      }
      if (dmin <= dmax / kCondTol || dmax == 0.0) throw_singular(digits, {sigma, 0.0});
      xt.segment(J * n, n) = bt.segment(J * n, n).array() / (sigma + lambda.array());
    }
    return mode_multiply_all<double>(Q, k, xt);
  }

  Mat Gblk = Mat(lambda.asDiagonal()) + Q.transpose() * sys.M * Q;
  Eigen::HessenbergDecomposition<Mat> hd(Gblk);
  const DRowMat<double> H = hd.matrixH();
  const Mat P = hd.matrixQ();

  DRowMat<double> W(n, n);
  Vec y(n);
  for (std::int64_t J = 0; J < nblocks; ++J) {
    decode_digits(J, n, digits);
    double sigma = 0.0;
    for (int d : digits) sigma += lambda(d);
    W = H;
    W.diagonal().array() += sigma;
    y.noalias() = P.transpose() * bt.segment(J * n, n);
    if (!hessenberg_solve<double>(W, y, kCondTol)) throw_singular(digits, {sigma, 0.0});
    xt.segment(J * n, n).noalias() = P * y;
  }
  return mode_multiply_all<double>(Q, k, xt);
}

Vec solve_general(const ShiftedKronSystem& sys) {
  using Cplx = std::complex<double>;
  const int n = static_cast<int>(sys.A.rows());
  const int k = sys.k;
  const SchurFactorization f = schur_decompose(sys.A);
  const CMat& U = f.U;
  const CMat& T = f.T;

  CVec bt = mode_multiply_all<Cplx>(U.adjoint(), k, sys.b.cast<Cplx>());

  CMat Gblk = T;
  if (sys.M.size() > 0) Gblk += U.adjoint() * sys.M.cast<Cplx>() * U;
  Eigen::HessenbergDecomposition<CMat> hd(Gblk);
  const DRowMat<Cplx> H = hd.matrixH();
  const CMat P = hd.matrixQ();

  const std::int64_t nblocks = ipow(n, k - 1);
  std::vector<int> digits(k - 1);
  std::vector<std::int64_t> stride(k - 1);
  for (int s = 0; s < k - 1; ++s) stride[s] = ipow(n, k - 2 - s);

  CVec xt(bt.size());
  DRowMat<Cplx> W(n, n);
  CVec r(n), y(n);
  // Back-substitute over leading blocks in descending linear order: the
  // upper-triangular couplings T(j_s, l), l > j_s only reference blocks with
  // larger linear index, which are already solved.
  for (std::int64_t J = nblocks - 1; J >= 0; --J) {
    decode_digits(J, n, digits);
    Cplx sigma = 0.0;
    for (int d : digits) sigma += T(d, d);
    r = bt.segment(J * n, n);
    for (int s = 0; s < k - 1; ++s) {
      const int js = digits[s];
      for (int l = js + 1; l < n; ++l) {
        const Cplx c = T(js, l);
        if (c != 0.0) r.noalias() -= c * xt.segment((J + (l - js) * stride[s]) * n, n);
      }
    }
    W = H;
    W.diagonal().array() += sigma;
    y.noalias() = P.adjoint() * r;
    if (!hessenberg_solve<Cplx>(W, y, kCondTol)) throw_singular(digits, sigma);
    xt.segment(J * n, n).noalias() = P * y;
  }

  CVec x = mode_multiply_all<Cplx>(U, k, xt);
  const double imag_norm = x.imag().norm();
  const double real_norm = x.real().norm();
  if (imag_norm > 1e-8 * std::max(real_norm, 1e-300))
    throw NumericalError(
        "solve_shifted_kron_system: solution of the real system has imaginary residue " +
        std::to_string(imag_norm / std::max(real_norm, 1e-300)));
  return x.real();
}

}  // namespace

SchurFactorization schur_decompose(const Mat& A) {
  if (A.rows() == 0 || A.rows() != A.cols())
    throw InvalidArgument("schur_decompose: A must be square and nonempty");
  Eigen::ComplexSchur<CMat> schur(A.transpose().cast<std::complex<double>>(), true);
  if (schur.info() != Eigen::Success)
    throw NumericalError("schur_decompose: QR iteration did not converge");
  return {schur.matrixU(), schur.matrixT()};
}

CVec kron_power_multiply(const CMat& U, int k, const CVec& b, bool adjoint) {
  if (U.rows() == 0 || U.rows() != U.cols())
    throw InvalidArgument("kron_power_multiply: U must be square and nonempty");
  if (k < 1) throw InvalidArgument("kron_power_multiply: k must be >= 1");
  if (b.size() != ipow(U.rows(), k))
    throw InvalidArgument("kron_power_multiply: b must have length n^k");
  if (adjoint) return mode_multiply_all<std::complex<double>>(U.adjoint(), k, b);
  return mode_multiply_all<std::complex<double>>(U, k, b);
}

Vec solve_shifted_kron_system(const ShiftedKronSystem& sys) {
  const Eigen::Index n = sys.A.rows();
  if (n == 0 || sys.A.cols() != n)
    throw InvalidArgument("solve_shifted_kron_system: A must be square and nonempty");
  if (sys.k < 2) throw InvalidArgument("solve_shifted_kron_system: k must be >= 2");
  if (sys.M.size() > 0 && (sys.M.rows() != n || sys.M.cols() != n))
    throw InvalidArgument("solve_shifted_kron_system: M must be n x n or empty");
  if (sys.b.size() != ipow(n, sys.k))
    throw InvalidArgument("solve_shifted_kron_system: b must have length n^k");

  const double scale = std::max(1.0, sys.A.cwiseAbs().maxCoeff());
  const double asym = (sys.A - sys.A.transpose()).cwiseAbs().maxCoeff();
  if (asym <= 1e-13 * scale) return solve_real_symmetric(sys);
  return solve_general(sys);
}

}  // namespace nlef
