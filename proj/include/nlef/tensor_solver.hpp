// k-way Bartels-Stewart solver for shifted Kronecker-sum systems
//   [ L_k(A') + I_{n^{k-1}} (x) M ] v = b
// via one Schur factorization of A' and block back-substitution over n^{k-1}
// size-n blocks. Total cost O(k n^{k+1}): the common diagonal-block matrix
// T + U*MU is Hessenberg-reduced once, so each block costs O(n^2) (Givens QR
// against its scalar shift) instead of a fresh O(n^3) factorization.
#pragma once

#include "nlef/types.hpp"

namespace nlef {

// Complex Schur form of A': A' = U T U*, T upper triangular.
struct SchurFactorization {
  CMat U;  // unitary
  CMat T;  // upper triangular; eigenvalues of A on the diagonal
};

// Description of [L_k(A') + I_{n^{k-1}} (x) M] v = b. M is the shift block
// (e.g. k*V2*B*B' or -k*eta*W2*B*B'); an empty M means no shift.
struct ShiftedKronSystem {
  Mat A;  // n x n
  Mat M;  // n x n, or 0 x 0 for M = 0
  int k = 2;
  Vec b;  // length n^k
};

// Complex Schur factorization of A' (not A). Throws NumericalError if the QR
// iteration fails to converge.
SchurFactorization schur_decompose(const Mat& A);

// (U^(x)k) b, or (U^(x)k)* b when adjoint is set, by k mode multiplications;
// never forms U^(x)k. Cost O(k n^{k+1}).
CVec kron_power_multiply(const CMat& U, int k, const CVec& b, bool adjoint);

// Solve the shifted Kronecker-sum system. The result is real (imaginary parts
// below 1e-8 relative are discarded; larger residue raises NumericalError).
// A symmetric A dispatches to an all-real eigendecomposition fast path where
// the diagonal blocks decouple completely.
// Throws SingularSystemError (with the 1-based offending leading multi-index
// and its scalar shift) when a diagonal block has condition estimate > 1e12.
Vec solve_shifted_kron_system(const ShiftedKronSystem& sys);

}  // namespace nlef
