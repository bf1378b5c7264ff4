// Riccati-module tests. Scalar cases are checked against quadratic-formula
// anchors; Lyapunov degenerations against dense Kronecker-sum solves.
#include "doctest.h"

#include <cmath>

#include "nlef/kron.hpp"
#include "nlef/riccati.hpp"
#include "test_util.hpp"

using namespace nlef;
using namespace testutil;

namespace {

// Dense solve of A'X + XA + Q = 0 (independent of the library solver).
Mat dense_lyap(const Mat& A, const Mat& Q) {
  const int n = static_cast<int>(A.rows());
  Mat L = dense_kron_sum(A.transpose(), n, 2);
  Vec x = L.lu().solve(Vec(-vec_rm(Q)));
  return unvec_rm(x, n, n);
}

double future_residual(const AreProblem& p, const Mat& W) {
  return (p.A.transpose() * W + W * p.A + p.C.transpose() * p.C -
          p.eta * W * p.B * p.B.transpose() * W)
      .norm();
}

double past_residual(const AreProblem& p, const Mat& V) {
  return (p.A.transpose() * V + V * p.A - p.eta * p.C.transpose() * p.C +
          V * p.B * p.B.transpose() * V)
      .norm();
}

double residual_scale(const AreProblem& p, const Mat& X) {
  return p.A.norm() * X.norm() + p.C.squaredNorm();
}

double max_real_eig(const Mat& A) { return A.eigenvalues().real().maxCoeff(); }
double min_real_eig(const Mat& A) { return A.eigenvalues().real().minCoeff(); }

// Small-gain test plant: every eta in [-1, 1] is feasible (gamma0 < 1).
// Reseeds the shared RNG so the drawn plant does not depend on test order.
AreProblem small_gain_plant(double eta, unsigned seed = 1) {
  rng().seed(seed);
  AreProblem p;
  p.A = random_stable_matrix(4, 1.0);
  p.B = random_matrix(4, 2);
  p.C = 0.3 * random_matrix(2, 4);
  p.eta = eta;
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("riccati");

TEST_CASE("future scalar anchor: a=-2, b=2, c=2, eta=0.5") {
  AreProblem p;
  p.A = Mat::Constant(1, 1, -2.0);
  p.B = Mat::Constant(1, 1, 2.0);
  p.C = Mat::Constant(1, 1, 2.0);
  p.eta = 0.5;
  Mat W2 = solve_future_are(p);
  // quadratic 2aW + c^2 - eta b^2 W^2 = 0, stabilizing root
  CHECK(W2(0, 0) == doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-12));
  CHECK(future_residual(p, W2) <= 1e-10 * residual_scale(p, W2));
  CHECK(p.A(0, 0) - p.eta * p.B(0, 0) * p.B(0, 0) * W2(0, 0) < 0.0);
}

TEST_CASE("past scalar anchor: a=-2, b=2, c=2, eta=0.5") {
  AreProblem p;
  p.A = Mat::Constant(1, 1, -2.0);
  p.B = Mat::Constant(1, 1, 2.0);
  p.C = Mat::Constant(1, 1, 2.0);
  p.eta = 0.5;
  Mat V2 = solve_past_are(p);
  CHECK(V2(0, 0) == doctest::Approx((1.0 + std::sqrt(3.0)) / 2.0).epsilon(1e-12));
  CHECK(past_residual(p, V2) <= 1e-10 * residual_scale(p, V2));
}

TEST_CASE("future ARE with C = 0 returns exactly zero") {
  AreProblem p;
  p.A = random_stable_matrix(5);
  p.B = random_matrix(5, 2);
  p.C = Mat::Zero(2, 5);
  p.eta = 0.5;
  Mat W2 = solve_future_are(p);
  CHECK(W2.norm() == 0.0);
}

TEST_CASE("eta = 0 future equals the observability Gramian") {
  AreProblem p;
  p.A = random_stable_matrix(5);
  p.B = random_matrix(5, 2);
  p.C = random_matrix(2, 5);
  p.eta = 0.0;
  Mat W2 = solve_future_are(p);
  Mat Q = dense_lyap(p.A, p.C.transpose() * p.C);
  CHECK(rel_err(W2, Q) < 1e-11);
}

TEST_CASE("eta = 0 past equals the inverse controllability Gramian") {
  AreProblem p;
  p.A = random_stable_matrix(4);
  p.B = random_matrix(4, 2);
  p.C = random_matrix(2, 4);
  p.eta = 0.0;
  Mat V2 = solve_past_are(p);
  // A P + P A' + BB' = 0 via the dense oracle on the transposed equation
  Mat P = dense_lyap(p.A.transpose(), p.B * p.B.transpose());
  CHECK(rel_err(Mat(V2 * P), Mat(Mat::Identity(4, 4))) < 1e-9);
}

TEST_CASE("B = 0, eta = 1 past solves the plain Lyapunov equation") {
  AreProblem p;
  p.A = random_stable_matrix(4);
  p.B = Mat::Zero(4, 2);
  p.C = random_matrix(2, 4);
  p.eta = 1.0;
  Mat V2 = solve_past_are(p);
  // A'V + VA = C'C
  Mat want = dense_lyap(p.A, Mat(-p.C.transpose() * p.C));
  CHECK(rel_err(V2, want) < 1e-11);
}

TEST_CASE("residual, symmetry, and closed-loop spectra across the eta range") {
  for (double eta : {-1.0, -0.5, 0.0, 0.3, 0.7, 1.0}) {
    CAPTURE(eta);
    AreProblem p = small_gain_plant(eta);
    Mat BBt = p.B * p.B.transpose();

    Mat W2 = solve_future_are(p);
    CHECK(future_residual(p, W2) <= 1e-10 * residual_scale(p, W2));
    CHECK((W2 - W2.transpose()).norm() <= 1e-12 * std::max(1.0, W2.norm()));
    CHECK(max_real_eig(Mat(p.A - eta * BBt * W2)) < 0.0);

    Mat V2 = solve_past_are(p);
    CHECK(past_residual(p, V2) <= 1e-10 * residual_scale(p, V2));
    CHECK((V2 - V2.transpose()).norm() <= 1e-12 * std::max(1.0, V2.norm()));
    if (eta >= 0.0) {
      // Yoo route: A + BB'V2 is similar to -(A - eta Yoo C'C)', anti-stable
      CHECK(min_real_eig(Mat(p.A + BBt * V2)) > 0.0);
    } else {
      CHECK(max_real_eig(Mat(p.A + BBt * V2)) < 0.0);
    }
    if (eta > 0.0) {
      Eigen::SelfAdjointEigenSolver<Mat> es(V2);
      CHECK(es.eigenvalues().minCoeff() > 0.0);  // Theorem-7 positivity
    }
  }
}

TEST_CASE("gamma_lower_bound anchors") {
  // scalar a=-1, b=c=1: Xoo = Yoo = sqrt(2)-1, gamma_hat = sqrt(4-2 sqrt 2)
  Mat A = Mat::Constant(1, 1, -1.0);
  Mat B = Mat::Constant(1, 1, 1.0);
  Mat C = Mat::Constant(1, 1, 1.0);
  GammaBound gb = gamma_lower_bound(A, B, C);
  CHECK(gb.gamma_hat == doctest::Approx(std::sqrt(4.0 - 2.0 * std::sqrt(2.0))).epsilon(1e-10));
  CHECK(gb.lower == doctest::Approx(gb.gamma_hat - 1.0));
  CHECK(gb.upper == doctest::Approx(gb.gamma_hat + 1.0));

  Mat As = random_stable_matrix(3);
  CHECK(gamma_lower_bound(As, random_matrix(3, 2), Mat::Zero(2, 3)).gamma_hat ==
        doctest::Approx(1.0));
  CHECK(gamma_lower_bound(As, Mat::Zero(3, 2), random_matrix(2, 3)).gamma_hat ==
        doctest::Approx(1.0));
}

TEST_CASE("future solve rejects gamma at or below the certified lower bound") {
  // lightly damped chain with high gain: gamma_hat well above 2
  AreProblem p;
  p.A = Mat(2, 2);
  p.A << -0.02, 1.0, 0.0, -0.02;
  p.B = Mat(2, 1);
  p.B << 0.0, 1.0;
  p.C = Mat(1, 2);
  p.C << 1.0, 0.0;
  GammaBound gb = gamma_lower_bound(p.A, p.B, p.C);
  REQUIRE(gb.lower > 1.2);
  const double gamma = 1.1;  // below gb.lower, hence certainly below gamma0
  p.eta = 1.0 - 1.0 / (gamma * gamma);
  CHECK_THROWS_AS(solve_future_are(p), SolvabilityError);
}

TEST_CASE("limit consistency: W2(eta) approaches the Lyapunov solution monotonically") {
  AreProblem p = small_gain_plant(0.0);
  Mat W0 = solve_future_are(p);
  double prev = std::numeric_limits<double>::infinity();
  for (double eta : {0.1, 0.01, 0.001}) {
    p.eta = eta;
    double dist = (solve_future_are(p) - W0).norm();
    CHECK(dist < prev);
    prev = dist;
  }
  CHECK(prev < 1e-2 * W0.norm());
}

TEST_CASE("eta = -1: past and future solutions coincide") {
  AreProblem p = small_gain_plant(-1.0);
  Mat W2 = solve_future_are(p);
  Mat V2 = solve_past_are(p);
  CHECK(rel_err(V2, W2) < 1e-13);
}

TEST_CASE("argument validation") {
  AreProblem p;
  p.A = random_stable_matrix(3);
  p.B = random_matrix(3, 1);
  p.C = random_matrix(1, 3);
  p.eta = 1.5;  // gamma would be imaginary
  CHECK_THROWS_AS(solve_future_are(p), InvalidArgument);
  CHECK_THROWS_AS(solve_past_are(p), InvalidArgument);
  p.eta = 0.5;
  p.B = random_matrix(4, 1);  // wrong row count
  CHECK_THROWS_AS(solve_future_are(p), InvalidArgument);
}

TEST_SUITE_END();
