// Benchmark model constructors: the two closed-form scalar/planar examples and
// the two finite-element PDE discretizations (viscous Burgers on (0,1) with
// homogeneous Dirichlet conditions, Kuramoto-Sivashinsky on a periodic domain
// with Hermite cubic elements), plus the mass-matrix square-root change of
// variables that puts each FEM system into standard PolySystem form.
#pragma once

#include "nlef/types.hpp"

namespace nlef {

enum class FemKind { Burgers, KuramotoSivashinsky };

struct FemModelConfig {
  int n = 0;             // state dimension (Burgers: interior nodes; KS: 2 x elements)
  int m = 1;             // input channels (characteristic functions)
  int p = 1;             // output channels
  double epsilon = 0.0;  // viscosity / KS parameter
  FemKind kind = FemKind::Burgers;
};

// Raw Galerkin system  E z' = A z + N (z (x) z) + B u,  y = C z  in finite
// element coordinates (after boundary elimination for Burgers; periodic for
// KS). z0 holds the L2-projection coefficients of the initial profile.
struct FemAssembly {
  Mat E, A, B, C, N;
  Vec z0;
};

// A PolySystem together with its canonical evaluation state x0 = S z0,
// S = E^{1/2}.
struct ModelRealization {
  PolySystem sys;
  Vec x0;
};

// Scalar system x' = a x + n_coef x^2 + b u, y = c x.
PolySystem build_example1(double a, double n_coef, double b, double c);

// Closed-form energy of the scalar system: the HJB equation is solved for
// dE/dx (quadratic formula, branch smooth and nonnegative through the origin)
// and integrated exactly with E(0) = 0. Throws std::domain_error when the
// square-root argument turns negative between 0 and x (possible for eta < 0,
// or for the eta = 0 future branch when a + n_coef * s crosses zero), and
// InvalidArgument for b = 0.
double analytic_energy_example1(double x, double a, double n_coef, double b, double c,
                                double eta, EnergyKind kind);

// Planar system with A = [[-1,1],[0,-1]], N(x (x) x) = [-x2^2; 0], B = [1;1],
// C = [1 1].
PolySystem build_example2();

// Burgers: z_t = epsilon z_xx - (z^2)_x / 2 on (0,1), z(0)=z(1)=0, discretized
// with n+1 linear elements (n interior nodes). Inputs are indicator functions
// chi_[(j-1)/m, j/m]; outputs are subdomain averages. Initial profile
// z0(x) = 0.0005 sin^2(2 pi x) on (0, 1/2), zero elsewhere. Polynomial terms
// use 2-point Gauss per element (exact); B/C indicator integrals are split
// exactly at subdomain breakpoints; the non-polynomial initial load uses
// 5-point Gauss.
FemAssembly assemble_burgers(const FemModelConfig& cfg);

// Kuramoto-Sivashinsky: z_t = -epsilon z_xx - epsilon^2 z_xxxx - epsilon (z^2)_x
// on a periodic domain, Hermite cubic elements with value+slope unknowns
// (n/2 nodes, n states). The fourth-derivative term is integrated by parts
// twice, the second-derivative and convection terms once; indicator inputs and
// the plain-integral outputs y_i = int chi_i z dx are sampled pointwise at the
// 5-point Gauss nodes (strict inequalities), matching the published benchmark
// values. Initial profile z0(x) = (0.01/sqrt(epsilon)) sin(pi x), L2-projected.
FemAssembly assemble_ks(const FemModelConfig& cfg);

// assemble_* followed by the change of variables x = S z with S = E^{1/2}
// (symmetric eigendecomposition): A -> S^-1 A S^-1 (re-symmetrized),
// B -> S^-1 B, C -> C S^-1, N -> S^-1 N (S^-1 (x) S^-1) with rows
// symmetrized, x0 = S z0.
ModelRealization build_burgers(const FemModelConfig& cfg);
ModelRealization build_ks(const FemModelConfig& cfg);

}  // namespace nlef
