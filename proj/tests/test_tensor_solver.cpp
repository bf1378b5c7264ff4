// tensor-solver unit tests. Oracle: dense n^k x n^k assembly plus a direct
// LU solve, built entirely from the naive helpers in test_util.hpp.
#include "doctest.h"

#include <complex>

#include "nlef/tensor_solver.hpp"
#include "test_util.hpp"

using namespace nlef;
using namespace testutil;

namespace {

// Dense assembly of [L_k(A') + I (x) M] for the oracle solves.
Mat dense_shifted_operator(const Mat& A, const Mat& M, int n, int k) {
  Mat L = dense_kron_sum(A.transpose(), n, k);
  if (M.size() > 0) {
    Mat Ik1 = Mat::Identity(static_cast<Eigen::Index>(ipow(n, k - 1)),
                            static_cast<Eigen::Index>(ipow(n, k - 1)));
    L += dense_kron(Ik1, M);
  }
  return L;
}

}  // namespace

TEST_SUITE_BEGIN("tensor_solver");

TEST_CASE("schur_decompose reconstructs A' with a unitary factor") {
  for (int n : {2, 5, 8}) {
    Mat A = random_matrix(n, n);
    SchurFactorization f = schur_decompose(A);
    CMat recon = f.U * f.T * f.U.adjoint();
    CHECK((recon - A.transpose().cast<std::complex<double>>()).norm() < 1e-12 * A.norm());
    CHECK((f.U.adjoint() * f.U - CMat::Identity(n, n)).norm() < 1e-12);
    // strictly upper triangular
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) CHECK(std::abs(f.T(i, j)) < 1e-13 * (1.0 + A.norm()));
  }
}

TEST_CASE("schur_decompose of a diagonal matrix is diagonal up to ordering") {
  Mat A = Mat::Zero(3, 3);
  A.diagonal() << -1.0, -2.5, 4.0;
  SchurFactorization f = schur_decompose(A);
  std::vector<double> eigs{f.T(0, 0).real(), f.T(1, 1).real(), f.T(2, 2).real()};
  std::sort(eigs.begin(), eigs.end());
  CHECK(eigs[0] == doctest::Approx(-2.5));
  CHECK(eigs[1] == doctest::Approx(-1.0));
  CHECK(eigs[2] == doctest::Approx(4.0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(f.T(i, j)) < 1e-12);
}

TEST_CASE("schur_decompose of a symmetric matrix has real diagonal T") {
  Mat A = random_spd_matrix(6);
  SchurFactorization f = schur_decompose(A);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(f.T(i, i).imag()) < 1e-11);
    for (int j = 0; j < 6; ++j)
      if (i != j) CHECK(std::abs(f.T(i, j)) < 1e-10 * A.norm());
  }
}

TEST_CASE("kron_power_multiply: identity, dense oracle, unitarity") {
  int n = 2, k = 2;
  CVec b = random_vector(4).cast<std::complex<double>>();
  CMat I = CMat::Identity(n, n);
  CHECK((kron_power_multiply(I, k, b, false) - b).norm() < 1e-14);

  CMat U = random_matrix(n, n).cast<std::complex<double>>();
  Mat Ur = U.real();
  Mat UU = dense_kron(Ur, Ur);
  CVec want = (UU * b.real()).cast<std::complex<double>>();
  CHECK((kron_power_multiply(U, k, b.real().cast<std::complex<double>>(), false) - want).norm() <
        1e-12);

  // adjoint then forward recovers b for unitary U
  SchurFactorization f = schur_decompose(random_matrix(3, 3));
  CVec c = random_vector(27).cast<std::complex<double>>();
  CVec roundtrip = kron_power_multiply(f.U, 3, kron_power_multiply(f.U, 3, c, true), false);
  CHECK((roundtrip - c).norm() < 1e-12 * c.norm());
}

TEST_CASE("solve: scalar case n=1, k=3") {
  ShiftedKronSystem sys;
  sys.A = Mat::Constant(1, 1, -2.0);
  sys.M = Mat::Constant(1, 1, 0.5);
  sys.k = 3;
  sys.b = Vec::Constant(1, 4.0);
  Vec v = solve_shifted_kron_system(sys);
  CHECK(v(0) == doctest::Approx(4.0 / (3 * -2.0 + 0.5)));
}

TEST_CASE("solve: M = 0 Lyapunov-type system matches dense solve") {
  int n = 3, k = 2;
  ShiftedKronSystem sys;
  sys.A = random_stable_matrix(n);
  sys.M = Mat();
  sys.k = k;
  sys.b = random_vector(static_cast<int>(ipow(n, k)));
  Vec got = solve_shifted_kron_system(sys);
  Vec want = dense_shifted_operator(sys.A, Mat::Zero(n, n), n, k).lu().solve(sys.b);
  CHECK(rel_err(got, want) < 1e-10);
}

TEST_CASE("solve: Riccati-style SPD shift matches dense solve") {
  int n = 3, k = 3;
  Mat A = random_stable_matrix(n);
  Mat V2 = random_spd_matrix(n, 0.5);
  Mat B = random_matrix(n, 2, 0.7);
  ShiftedKronSystem sys;
  sys.A = A;
  sys.M = 3.0 * V2 * B * B.transpose();
  sys.k = k;
  sys.b = random_vector(static_cast<int>(ipow(n, k)));
  Vec got = solve_shifted_kron_system(sys);
  Vec want = dense_shifted_operator(sys.A, sys.M, n, k).lu().solve(sys.b);
  CHECK(rel_err(got, want) < 1e-10);
}

TEST_CASE("oracle equivalence sweep: n in 1..4, k in 2..4, random stable systems") {
  for (int n = 1; n <= 4; ++n) {
    for (int k = 2; k <= 4; ++k) {
      for (int trial = 0; trial < 20; ++trial) {
        ShiftedKronSystem sys;
        sys.A = random_stable_matrix(n);
        // alternate between no shift, dissipative shift, and random shift
        if (trial % 3 == 0)
          sys.M = Mat();
        else if (trial % 3 == 1)
          sys.M = Mat(k * random_spd_matrix(n, 0.4));
        else
          sys.M = random_matrix(n, n, 0.2);
        sys.k = k;
        sys.b = random_vector(static_cast<int>(ipow(n, k)));
        Vec got = solve_shifted_kron_system(sys);
        Mat Mdense = sys.M.size() ? sys.M : Mat(Mat::Zero(n, n));
        Vec want = dense_shifted_operator(sys.A, Mdense, n, k).lu().solve(sys.b);
        CHECK(rel_err(got, want) < 1e-10);
      }
    }
  }
}

TEST_CASE("symmetric A takes the real fast path and still matches the oracle") {
  for (int n : {2, 4, 6}) {
    for (int k : {2, 3}) {
      Mat A = -random_spd_matrix(n);
      Mat M = random_matrix(n, n, 0.3);
      ShiftedKronSystem sys{A, M, k, random_vector(static_cast<int>(ipow(n, k)))};
      Vec got = solve_shifted_kron_system(sys);
      Vec want = dense_shifted_operator(A, M, n, k).lu().solve(sys.b);
      CHECK(rel_err(got, want) < 1e-10);
    }
  }
}

TEST_CASE("singular diagonal block raises SingularSystemError with its index") {
  // A = diag(1,-1), k=2, M=0: leading index (1) gives shift +1 and the last
  // slot block T + I = diag(2, 0) is singular.
  ShiftedKronSystem sys;
  sys.A = Mat::Zero(2, 2);
  sys.A.diagonal() << 1.0, -1.0;
  sys.M = Mat();
  sys.k = 2;
  sys.b = random_vector(4);
  CHECK_THROWS_AS(solve_shifted_kron_system(sys), SingularSystemError);
  try {
    solve_shifted_kron_system(sys);
  } catch (const SingularSystemError& e) {
    REQUIRE(e.multi_index.size() == 1);
    CHECK(e.multi_index[0] >= 1);  // reported 1-based
    // the offending leading multi-index selects eigenvalue +1 or -1
    CHECK(std::abs(std::abs(e.shift.real()) - 1.0) < 1e-12);
    CHECK(std::abs(e.shift.imag()) < 1e-12);
  }

  // complex-path variant: eigenvalues +/- i, block shift i + (-i) = 0 with a
  // zero diagonal entry
  ShiftedKronSystem rot;
  rot.A = Mat::Zero(2, 2);
  rot.A << 0.0, 1.0, -1.0, 0.0;
  rot.M = Mat();
  rot.k = 2;
  rot.b = random_vector(4);
  CHECK_THROWS_AS(solve_shifted_kron_system(rot), SingularSystemError);
}

TEST_CASE("solution of a real system is real") {
  // complex Schur path (nonsymmetric A with complex spectrum)
  Mat A(3, 3);
  A << -1.0, 2.0, 0.0, -2.0, -1.0, 0.5, 0.0, -0.3, -1.5;
  ShiftedKronSystem sys{A, random_matrix(3, 3, 0.2), 3, random_vector(27)};
  Vec got = solve_shifted_kron_system(sys);  // would throw on imaginary residue
  Vec want = dense_shifted_operator(sys.A, sys.M, 3, 3).lu().solve(sys.b);
  CHECK(rel_err(got, want) < 1e-10);
}

TEST_SUITE_END();
