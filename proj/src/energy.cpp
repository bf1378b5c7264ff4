#include "nlef/energy.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "nlef/kron.hpp"
#include "nlef/riccati.hpp"
#include "nlef/tensor_solver.hpp"

namespace nlef {

namespace {

// Shared degree-by-degree recurrence for both energy families. The quadratic
// seed P2 solves the matching Riccati equation; for k >= 3 the coefficient
// w_k solves
//
//   [ L_k(A') + sgn * k * (I (x) P2 B B') ] w_k
//       = -L_{k-1}(N') w_{k-1}
//         + qc * sum_{i+j=k+2, i,j>=3} i*j * vec( (B'W_i)' (B'W_j) )
//
// with (sgn, qc) = (-eta, eta/4) for the future energy and (+1, -1/4) for the
// past energy, W_i = mat(w_i; n x n^{i-1}). The closed-loop form moves the
// rank-structured shift into every slot instead: L_k((A + sgn*BB'P2)'). Both
// are exact identities for the symmetrized solution; they differ only in how
// the non-symmetric intermediate is distributed over tensor slots.
EnergyCoefficients compute(const PolySystem& sys, double eta, int d, EnergyKind kind,
                           const EnergyOptions& opts) {
  sys.validate();
  if (d < 2) throw InvalidArgument("energy: polynomial degree must be at least 2");

  const int n = sys.n;
  AreProblem prob{sys.A, sys.B, sys.C, eta};
  const Mat P2 = (kind == EnergyKind::Future) ? solve_future_are(prob) : solve_past_are(prob);
  const double sgn = (kind == EnergyKind::Future) ? -eta : 1.0;
  const double qc = (kind == EnergyKind::Future) ? eta / 4.0 : -0.25;
  const Mat BBt = sys.B * sys.B.transpose();
  const Mat shift_base = P2 * BBt;
  const Mat Acl = sys.A + sgn * BBt * P2;
  const Mat Nt = sys.N.transpose();

  EnergyCoefficients ec;
  ec.n = n;
  ec.d = d;
  ec.eta = eta;
  ec.kind = kind;
  ec.coeffs[2] = symmetrize(vec_rm(P2), n, 2);

  // B' W_i caches for the quadratic gradient terms (only degrees 3..d-1 feed
  // later right-hand sides).
  std::map<int, Mat> BtW;

  for (int k = 3; k <= d; ++k) {
    const Eigen::Index nk = static_cast<Eigen::Index>(ipow(n, k));
    Vec rhs = -kron_sum_apply(Nt, ec.coeffs.at(k - 1), k - 1);
    for (int i = 3; i <= k - 1; ++i) {
      const int j = k + 2 - i;
      Mat T = BtW.at(i).transpose() * BtW.at(j);  // n^{i-1} x n^{j-1}
      rhs.noalias() += (qc * i * j) * vec_rm(T);
    }

    ShiftedKronSystem s;
    s.k = k;
    s.b = rhs;
    if (opts.form == OperatorForm::LastSlot) {
      s.A = sys.A;
      s.M = (sgn * k) * shift_base;
    } else {
      s.A = Acl;
    }
    Vec wk = solve_shifted_kron_system(s);

    // Raw (pre-symmetrization) defect of the linear solve itself.
    Vec lhs = kron_sum_apply(Mat(s.A.transpose()), wk, k);
    if (s.M.size() > 0) {
      Eigen::Map<const RowMat> view(wk.data(), nk / n, n);
      RowMat shifted = view * s.M.transpose();
      lhs += Eigen::Map<const Vec>(shifted.data(), nk);
    }
    const double rel = (lhs - rhs).norm() / std::max(rhs.norm(), 1e-300);
    if (!(rel <= 1e-9))
      throw NumericalError("energy: degree-" + std::to_string(k) +
                           " tensor solve verification failed (relative residual " +
                           std::to_string(rel) + ")");

    ec.coeffs[k] = symmetrize(wk, n, k);
    if (k < d)
      BtW[k] = sys.B.transpose() *
               Eigen::Map<const RowMat>(ec.coeffs.at(k).data(), n, nk / n);
  }
  return ec;
}

}  // namespace

EnergyCoefficients approx_future_energy(const PolySystem& sys, double eta, int d,
                                        const EnergyOptions& opts) {
  return compute(sys, eta, d, EnergyKind::Future, opts);
}

EnergyCoefficients approx_past_energy(const PolySystem& sys, double eta, int d,
                                      const EnergyOptions& opts) {
  return compute(sys, eta, d, EnergyKind::Past, opts);
}

double hjb_residual(const PolySystem& sys, const EnergyCoefficients& ec, const Vec& x) {
  sys.validate();
  if (ec.n != sys.n) throw InvalidArgument("hjb_residual: coefficient/system dimension mismatch");
  if (x.size() != sys.n) throw InvalidArgument("hjb_residual: state has wrong dimension");

  const Vec g = poly_gradient(ec, x);
  const Vec f = sys.A * x + sys.N * kron_power(x, 2);
  const double bg2 = (sys.B.transpose() * g).squaredNorm();
  const double cx2 = (sys.C * x).squaredNorm();
  if (ec.kind == EnergyKind::Future) return g.dot(f) - 0.5 * ec.eta * bg2 + 0.5 * cx2;
  return g.dot(f) + 0.5 * bg2 - 0.5 * ec.eta * cx2;
}

Vec feedback_control(const PolySystem& sys, const EnergyCoefficients& ec, const Vec& x,
                     const Mat& R) {
  sys.validate();
  if (ec.kind != EnergyKind::Future)
    throw InvalidArgument("feedback_control: requires future-energy coefficients");
  if (ec.n != sys.n)
    throw InvalidArgument("feedback_control: coefficient/system dimension mismatch");
  if (x.size() != sys.n) throw InvalidArgument("feedback_control: state has wrong dimension");
  if (R.rows() != sys.m || R.cols() != sys.m)
    throw InvalidArgument("feedback_control: R must be m x m");
  if ((R - R.transpose()).norm() > 1e-12 * std::max(1.0, R.norm()))
    throw InvalidArgument("feedback_control: R must be symmetric");
  Eigen::LLT<Mat> llt(R);
  if (llt.info() != Eigen::Success)
    throw InvalidArgument("feedback_control: R must be positive definite");
  return -llt.solve(sys.B.transpose() * poly_gradient(ec, x));
}

}  // namespace nlef
