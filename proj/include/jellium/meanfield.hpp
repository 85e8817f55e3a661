#pragma once
#include <functional>
#include <vector>

#include "jellium/grid.hpp"
#include "jellium/lcp.hpp"

namespace jellium {

// Minimize int(v * rho) over {0 <= rho <= rho_max, int(rho) = mass}: fill the
// sublevel sets of v to the ceiling, the threshold level located by bisection,
// ties at the threshold filled uniformly. Exact mass by construction.
ScalarField bathtub_solve(const ScalarField& v, double rho_max, double mass);

// Euclidean projection onto {0 <= rho <= rho_max, int(rho) = mass}:
// clip(z - s, 0, rho_max) with the shift s found by bisection.
ScalarField project_to_box_mass(const ScalarField& z, double rho_max, double mass);

struct FlockingProblem {
  ScalarField v;                      // external potential samples
  std::function<double(Vec2)> w;      // smooth bounded pair interaction
  bool w_positive_type = false;       // declared Fourier positivity (uniqueness)
  double lambda = 0.0;
  double rho_max = 1.0;
  double mass = 1.0;

  void validate() const;  // throws on infeasible mass or missing w
};

struct FlockingOptions {
  int max_iterations = 2000;
  double tolerance = 1e-6;   // projected-gradient norm (grid L2, unit step)
  double initial_step = 1.0;
  int interface_band_cells = 2;  // excluded from the saturation statistic
};

struct FlockingResult {
  ScalarField density;
  double energy = 0.0;
  double kkt_residual = 0.0;  // projected-gradient norm at exit
  int iterations = 0;
  bool converged = false;
  double support_area = 0.0;
  double saturated_fraction = 0.0;  // support cells >= 0.99 rho_max, band excluded
};

// Projected gradient descent with backtracking on
//   E[rho] = int(v rho) + (lambda/2) int int rho(x) w(x-y) rho(y).
// Energy is monotone non-increasing across iterations.
FlockingResult flocking_solve(const FlockingProblem& problem,
                              const FlockingOptions& opts = {});

// Flocking energy of a given density (same discretization as the solver).
double flocking_energy(const FlockingProblem& problem, const ScalarField& rho);

struct EquilibriumOptions {
  double mass_tol = 1e-9;  // relative, for the chemical-potential bisection
  int max_bisections = 80;
  int boundary_margin_cells = 2;  // support may not come this close to the edge
  LcpOptions lcp = {1.9, 1e-10, 200000, 32};
};

struct EquilibriumResult {
  ScalarField density;
  double mu = 0.0;          // chemical potential at the solved mass
  double mass_error = 0.0;  // relative, before the final exact rescale
  int bisections = 0;
  bool converged = false;
};

// Equilibrium measure of the energy int(v rho) + 1/2 int int rho C rho with
// C = -log: solved as an obstacle problem for Psi = v + C * rho - mu >= 0 via
// the complementarity solver, with the far field pinned to the monopole of the
// target mass and mu adjusted by bisection. On the support 2 pi rho = Lap_h v.
EquilibriumResult meanfield_equilibrium(const ScalarField& v, double mass,
                                        const EquilibriumOptions& opts = {});

}  // namespace jellium
