#include "nlef/riccati.hpp"

#include <lapacke.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <iostream>
#include <sstream>

#include "nlef/kron.hpp"
#include "nlef/tensor_solver.hpp"

namespace nlef {

namespace {

extern "C" {
// dgees selector: pick the open-left-half-plane spectrum.
lapack_logical select_lhp(const double* re, const double* /*im*/) { return *re < 0.0 ? 1 : 0; }
}

// Solve A'X + XA + Q - XGX = 0 for the stabilizing solution (A - GX Hurwitz)
// via the ordered real Schur form of the Hamiltonian [[A, -G], [-Q, -A']].
Mat care_stabilizing(const Mat& A, const Mat& G, const Mat& Q, const char* what) {
  const int n = static_cast<int>(A.rows());
  Mat H(2 * n, 2 * n);
  H.topLeftCorner(n, n) = A;
  H.topRightCorner(n, n) = -G;
  H.bottomLeftCorner(n, n) = -Q;
  H.bottomRightCorner(n, n) = -A.transpose();

  Mat Z(2 * n, 2 * n);
  Vec wr(2 * n), wi(2 * n);
  lapack_int sdim = 0;
  lapack_int info =
      LAPACKE_dgees(LAPACK_COL_MAJOR, 'V', 'S', select_lhp, 2 * n, H.data(), 2 * n, &sdim,
                    wr.data(), wi.data(), Z.data(), 2 * n);
  if (info < 0)
    throw NumericalError(std::string(what) + ": invalid argument passed to dgees");
  if (info > 0)
    throw SolvabilityError(std::string(what) +
                           ": Hamiltonian Schur decomposition failed (dgees info " +
                           std::to_string(info) + ")");
  if (sdim != n) {
    std::ostringstream msg;
    msg << what << ": Hamiltonian has " << sdim << " stable eigenvalues, expected " << n
        << "; no stabilizing solution exists for these parameters";
    throw SolvabilityError(msg.str());
  }

  Mat U11 = Z.topLeftCorner(n, n);
  Mat U21 = Z.bottomLeftCorner(n, n);
  Eigen::PartialPivLU<Mat> lu(U11.transpose());
  if (lu.determinant() == 0.0)
    throw SolvabilityError(std::string(what) + ": singular invariant-subspace basis");
  Mat X = lu.solve(U21.transpose()).transpose();
  X = 0.5 * (X + X.transpose());

  // One Newton defect-correction step: solve the Lyapunov equation
  // (A-GX)' D + D (A-GX) = -F(X) and keep the update when it helps.
  auto residual = [&](const Mat& S) {
    return Mat(A.transpose() * S + S * A + Q - S * G * S);
  };
  Mat F = residual(X);
  try {
    ShiftedKronSystem lyap;
    lyap.A = A - G * X;
    lyap.k = 2;
    lyap.b = -vec_rm(F);
    Mat D = unvec_rm(solve_shifted_kron_system(lyap), n, n);
    Mat Xp = X + D;
    Xp = 0.5 * (Xp + Xp.transpose());
    if (residual(Xp).norm() < F.norm()) X = Xp;
  } catch (const NumericalError&) {
    // polish is best-effort; the residual check below judges the result
  }
  return X;
}

// Closed-loop Hurwitz test.
bool is_hurwitz(const Mat& A) { return A.eigenvalues().real().maxCoeff() < 0.0; }

// Solve the Lyapunov equation A'X + XA = R with the k=2 tensor solver.
Mat lyap_solve(const Mat& A, const Mat& R) {
  ShiftedKronSystem sys;
  sys.A = A;
  sys.k = 2;
  sys.b = vec_rm(R);
  Mat X = unvec_rm(solve_shifted_kron_system(sys), static_cast<int>(A.rows()),
                   static_cast<int>(A.rows()));
  return 0.5 * (X + X.transpose());
}

void validate_problem(const AreProblem& p, const char* what) {
  const Eigen::Index n = p.A.rows();
  if (n == 0 || p.A.cols() != n)
    throw InvalidArgument(std::string(what) + ": A must be square and nonempty");
  if (p.B.rows() != n) throw InvalidArgument(std::string(what) + ": B must have n rows");
  if (p.C.cols() != n) throw InvalidArgument(std::string(what) + ": C must have n columns");
  if (!(p.eta <= 1.0))
    throw InvalidArgument(std::string(what) + ": eta must satisfy eta <= 1 (eta = 1 - 1/gamma^2)");
}

void check_residual(double res, double scale, const char* what) {
  if (!(res <= 1e-10 * std::max(scale, 1e-300)) || !std::isfinite(res))
    throw NumericalError(std::string(what) + ": Riccati residual " + std::to_string(res) +
                         " exceeds tolerance");
}

}  // namespace

Mat solve_future_are(const AreProblem& p) {
  validate_problem(p, "solve_future_are");
  const int n = static_cast<int>(p.A.rows());
  const Mat CtC = p.C.transpose() * p.C;

  if (CtC.norm() == 0.0) {
    if (!is_hurwitz(p.A))
      throw SolvabilityError("solve_future_are: C = 0 with unstable A has no stabilizing solution");
    return Mat::Zero(n, n);
  }

  Mat W2;
  if (p.eta == 0.0) {
    // observability-Gramian limit: A'W + WA + C'C = 0
    W2 = lyap_solve(p.A, Mat(-CtC));
  } else {
    if (p.eta > 0.0 && p.eta < 1.0) {
      // reject gamma that is certainly at or below gamma0; the bound needs
      // both eta = 1 AREs, which can fail (an unstable mode of A that is
      // nearly invisible to C makes Yoo unbounded) even when the requested
      // solve is fine, so an uncomputable bound just skips the gate
      const double gamma = 1.0 / std::sqrt(1.0 - p.eta);
      bool have_bound = false;
      GammaBound gb;
      try {
        gb = gamma_lower_bound(p.A, p.B, p.C);
        have_bound = true;
      } catch (const SolvabilityError&) {
      } catch (const NumericalError&) {
      }
      if (have_bound && gamma <= gb.lower) {
        std::ostringstream msg;
        msg << "solve_future_are: gamma = " << gamma << " is at or below the certified bound "
            << gb.lower << " (gamma_hat = " << gb.gamma_hat << "), so gamma <= gamma0";
        throw SolvabilityError(msg.str());
      }
    }
    W2 = care_stabilizing(p.A, Mat(p.eta * p.B * p.B.transpose()), CtC, "solve_future_are");
  }

  if (!is_hurwitz(Mat(p.A - p.eta * p.B * p.B.transpose() * W2)))
    throw SolvabilityError("solve_future_are: computed solution is not stabilizing");
  const double res = (p.A.transpose() * W2 + W2 * p.A + CtC -
                      p.eta * W2 * p.B * p.B.transpose() * W2)
                         .norm();
  check_residual(res, p.A.norm() * W2.norm() + CtC.trace(), "solve_future_are");
  return W2;
}

Mat solve_past_are(const AreProblem& p) {
  validate_problem(p, "solve_past_are");
  const int n = static_cast<int>(p.A.rows());
  const Mat BBt = p.B * p.B.transpose();
  const Mat CtC = p.C.transpose() * p.C;

  Mat V2;
  if (BBt.norm() == 0.0) {
    // quadratic term vanishes: A'V + VA = eta C'C
    V2 = lyap_solve(p.A, Mat(p.eta * CtC));
  } else if (p.eta >= 0.0) {
    // Yoo route: stabilizing solution of A Y + Y A' + BB' - eta Y C'C Y = 0,
    // written as the future-type ARE in (A', C', B'), then V2 = Yoo^{-1}.
    auto yoo_route = [&]() -> Mat {
      Mat Yoo;
      if (p.eta == 0.0)
        Yoo = lyap_solve(p.A.transpose(), Mat(-BBt));
      else
        Yoo = care_stabilizing(p.A.transpose(), Mat(p.eta * CtC), BBt, "solve_past_are");
      if (!is_hurwitz(Mat(p.A - p.eta * Yoo * CtC)))
        throw SolvabilityError("solve_past_are: Yoo is not the stabilizing Gramian solution");

      Eigen::SelfAdjointEigenSolver<Mat> es(Yoo);
      const Vec lam = es.eigenvalues();
      if (lam.minCoeff() <= 0.0) {
        std::ostringstream msg;
        msg << "solve_past_are: Yoo is singular or indefinite (eigenvalues in [" << lam.minCoeff()
            << ", " << lam.maxCoeff() << "]); V2 = Yoo^{-1} does not exist";
        throw SolvabilityError(msg.str());
      }
      if (lam.maxCoeff() / lam.minCoeff() > 1e10)
        std::cerr << "solve_past_are: warning: cond(Yoo) = " << lam.maxCoeff() / lam.minCoeff()
                  << " > 1e10; V2 = Yoo^{-1} may lose accuracy" << std::endl;
      Mat V = es.eigenvectors() * lam.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
      return 0.5 * (V + V.transpose());
    };

    if (p.eta == 0.0) {
      V2 = yoo_route();
    } else {
      try {
        V2 = yoo_route();
      } catch (const SolvabilityError&) {
        // Yoo is unbounded when an unstable mode of A is nearly invisible to
        // C, but Eq. (52) itself still has the anti-stabilizing solution
        // (A + BB'V2 anti-stable, matching the time-reversed flow); solve it
        // from its own Hamiltonian via the substitution A -> -A.
        V2 = care_stabilizing(Mat(-p.A), BBt, Mat(p.eta * CtC), "solve_past_are");
        if (!is_hurwitz(Mat(-p.A - BBt * V2)))
          throw SolvabilityError("solve_past_are: computed solution is not anti-stabilizing");
        Eigen::SelfAdjointEigenSolver<Mat> es(V2);
        if (es.eigenvalues().minCoeff() <= 0.0) {
          std::ostringstream msg;
          msg << "solve_past_are: computed solution is not positive definite (eigenvalues in ["
              << es.eigenvalues().minCoeff() << ", " << es.eigenvalues().maxCoeff() << "])";
          throw SolvabilityError(msg.str());
        }
      }
    }

    // Newton polish directly on the past ARE; A + BB'V2 is anti-stable here,
    // so the Lyapunov operator of the polish step is nonsingular.
    auto residual = [&](const Mat& V) {
      return Mat(p.A.transpose() * V + V * p.A - p.eta * CtC + V * BBt * V);
    };
    Mat F = residual(V2);
    try {
      ShiftedKronSystem lyap;
      lyap.A = p.A + BBt * V2;
      lyap.k = 2;
      lyap.b = -vec_rm(F);
      Mat D = unvec_rm(solve_shifted_kron_system(lyap), n, n);
      Mat Vp = V2 + D;
      Vp = 0.5 * (Vp + Vp.transpose());
      if (residual(Vp).norm() < F.norm()) V2 = Vp;
    } catch (const NumericalError&) {
    }
  } else {
    // eta < 0 (gamma < 1): the Yoo route has no stabilizing solution; solve
    // Eq. (52) from its own Hamiltonian [[A, BB'], [eta C'C, -A']]. At
    // eta = -1 this Hamiltonian equals the future one, so V2 = W2 exactly.
    V2 = care_stabilizing(p.A, Mat(-BBt), Mat(-p.eta * CtC), "solve_past_are");
    if (!is_hurwitz(Mat(p.A + BBt * V2)))
      throw SolvabilityError("solve_past_are: computed solution is not stabilizing");
  }

  const double res =
      (p.A.transpose() * V2 + V2 * p.A - p.eta * CtC + V2 * BBt * V2).norm();
  check_residual(res, p.A.norm() * V2.norm() + CtC.trace(), "solve_past_are");
  return V2;
}

GammaBound gamma_lower_bound(const Mat& A, const Mat& B, const Mat& C) {
  AreProblem std_problem{A, B, C, 1.0};
  Mat Xoo = solve_future_are(std_problem);
  // Yoo solves A Y + Y A' + BB' - Y C'C Y = 0: the future ARE of (A', C', B')
  AreProblem dual{A.transpose(), C.transpose(), B.transpose(), 1.0};
  Mat Yoo = solve_future_are(dual);
  const double lam_max = std::max(0.0, (Xoo * Yoo).eigenvalues().real().maxCoeff());
  GammaBound gb;
  gb.gamma_hat = std::sqrt(1.0 + lam_max);
  gb.lower = gb.gamma_hat - 1.0;
  gb.upper = gb.gamma_hat + 1.0;
  return gb;
}

}  // namespace nlef
