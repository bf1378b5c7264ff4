// Degree-by-degree computation of past/future H-infinity energy function
// approximations for quadratic systems x' = Ax + N(x (x) x) + Bu, y = Cx:
// seed with the degree-2 ARE solution, then for k = 3..d solve one shifted
// Kronecker-sum system per degree and symmetrize. Also provides the HJB
// residual evaluation and the optimal feedback law.
#pragma once

#include "nlef/types.hpp"

namespace nlef {

// Left-hand-side operator of the degree-k solves.
//  - LastSlot (default): [L_k(A') -+ k eta (I (x) P2 BB')], the literal
//    linear-system form of the coefficient recurrences; this is the form the
//    published benchmark tables embed.
//  - ClosedLoop: L_k((A -+ eta BB'P2)'), the slot-symmetric spread of the
//    same shift. Its solutions satisfy the degree-k HJB identity exactly
//    (pointwise residual decays like |x|^{d+1}); the last-slot form leaves a
//    degree-3 remainder because its raw solutions are not slot-symmetric.
enum class OperatorForm { LastSlot, ClosedLoop };

struct EnergyOptions {
  OperatorForm form = OperatorForm::LastSlot;
};

// Future energy coefficients (kind = Future): coeffs[2] = vec(W2) and for
// k >= 3, [L_k(A') - k eta (I (x) W2 BB')] w_k =
//   -L_{k-1}(N') w_{k-1} + (eta/4) sum_{i,j>=3, i+j=k+2} i j vec(Wi' BB' Wj),
// Wi = mat(w_i; n x n^{i-1}). Every degree is symmetrized before use in later
// right-hand sides; the raw per-degree linear residual must be <= 1e-9
// relative or NumericalError is thrown.
EnergyCoefficients approx_future_energy(const PolySystem& sys, double eta, int d,
                                        const EnergyOptions& opts = {});

// Past energy coefficients (kind = Past): coeffs[2] = vec(V2) and for k >= 3,
// [L_k(A') + k (I (x) V2 BB')] v_k =
//   -L_{k-1}(N') v_{k-1} - (1/4) sum_{i,j>=3, i+j=k+2} i j vec(Vi' BB' Vj).
// eta enters only through V2.
EnergyCoefficients approx_past_energy(const PolySystem& sys, double eta, int d,
                                      const EnergyOptions& opts = {});

// Scalar left-hand side of the HJB equation at x, using ec's kind and eta:
//   future: grad E . (Ax + N(x(x)x)) - (eta/2) grad E BB' grad E' + 1/2 |Cx|^2
//   past  : grad E . (Ax + N(x(x)x)) + (1/2) grad E BB' grad E' - (eta/2)|Cx|^2
double hjb_residual(const PolySystem& sys, const EnergyCoefficients& ec, const Vec& x);

// Optimal feedback u*(x) = -R^{-1} B' grad E(x) for a future energy function.
Vec feedback_control(const PolySystem& sys, const EnergyCoefficients& ec, const Vec& x,
                     const Mat& R);

}  // namespace nlef
