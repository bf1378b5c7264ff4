// H-infinity algebraic Riccati solvers seeding the degree-2 energy
// coefficients, with eta = 1 - 1/gamma^2:
//   future:  0 = A'W2 + W2 A + C'C - eta W2 BB' W2     (stabilizing W2)
//   past :   0 = A'V2 + V2 A - eta C'C + V2 BB' V2
// Solutions come from the ordered real Schur form of the 2n x 2n Hamiltonian
// (invariant-subspace method) followed by one Newton defect-correction step,
// which handles the sign-indefinite quadratic terms of the gamma < 1 regime.
#pragma once

#include "nlef/types.hpp"

namespace nlef {

// Data of one H-infinity ARE. (A, B) stabilizable and (A, C) detectable are
// assumed; violations surface as SolvabilityError after the solve when the
// closed-loop eigenvalue test fails.
struct AreProblem {
  Mat A;  // n x n
  Mat B;  // n x m
  Mat C;  // p x n
  double eta = 0.0;
};

// gamma_hat = sqrt(1 + lambda_max(Xoo Yoo)) computed from the standard
// (eta = 1) AREs, bracketing the true threshold: gamma0 in [lower, upper].
struct GammaBound {
  double gamma_hat = 1.0;
  double lower = 0.0;  // gamma_hat - 1
  double upper = 2.0;  // gamma_hat + 1
};

// Stabilizing solution W2 of the future ARE: A - eta BB'W2 is Hurwitz.
// eta = 0 degenerates to the observability-Gramian Lyapunov equation
// A'Q + QA + C'C = 0. Requires eta <= 1; for eta in (0,1) the request is
// rejected up front when gamma = 1/sqrt(1-eta) <= gamma_hat - 1 (certain
// infeasibility). When the bound itself is uncomputable (one of the eta = 1
// AREs has no stabilizing solution) the gate is skipped and the solve
// proceeds; infeasibility then surfaces as SolvabilityError from the Schur
// selection or the closed-loop test.
Mat solve_future_are(const AreProblem& p);

// Solution V2 of the past ARE. For eta >= 0 this follows the Yoo route:
// Yoo is the stabilizing solution of A Y + Y A' + BB' - eta Y C'C Y = 0
// (A - eta Yoo C'C Hurwitz) and V2 = Yoo^{-1}; Yoo singular or indefinite
// raises SolvabilityError with its extreme eigenvalues, and condition number
// > 1e10 emits a warning on stderr. If the Yoo route fails for eta > 0
// (an unstable mode of A that is nearly invisible to C makes Yoo unbounded),
// Eq. (52) is solved directly from its own Hamiltonian, selecting the
// anti-stabilizing branch (A + BB'V2 anti-stable), which is the same
// solution whenever both routes exist. For eta < 0 the direct solve selects
// the stabilizing branch instead (the Yoo route has none there); at
// eta = -1 this makes the past and future Hamiltonians coincide, so V2
// equals W2 exactly. eta = 0 with B = 0 or eta = 1 with B = 0 reduce to
// plain Lyapunov equations.
Mat solve_past_are(const AreProblem& p);

// gamma0 estimate per Remark 1 of the underlying theory: solve the standard
// AREs, form gamma_hat = sqrt(1 + lambda_max(Xoo Yoo)), bracket gamma0 by
// [gamma_hat - 1, gamma_hat + 1].
GammaBound gamma_lower_bound(const Mat& A, const Mat& B, const Mat& C);

}  // namespace nlef
