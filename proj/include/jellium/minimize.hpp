#pragma once
#include <cstdint>
#include <functional>

#include "jellium/hamiltonian.hpp"

namespace jellium {

// Smooth objective over point configurations, optionally constrained to a
// feasible region (hard walls: steps leaving it are rejected by line search).
struct Objective {
  std::function<double(const std::vector<Vec2>&)> energy;
  std::function<std::vector<Vec2>(const std::vector<Vec2>&)> gradient;
  std::function<bool(Vec2)> feasible;  // null: unconstrained
};

Objective make_objective(const PlasmaHamiltonian& h);

struct MinimizeOptions {
  int max_iterations = 200000;
  double armijo_c = 1e-4;       // sufficient-decrease constant
  double initial_step = 0.05;
  double gradient_tolerance = 1e-8;  // on ||grad||_2 relative to max(1, |E|)
  int multistart_runs = 8;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct MinimizeResult {
  std::vector<Vec2> points;
  double energy = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;
  int iterations = 0;
  int best_run = -1;  // multistart only
};

// Gradient descent with Armijo backtracking (step halving). The energy is
// non-increasing along iterates; termination on the relative gradient test,
// iteration cap, or line-search failure (converged=false unless the gradient
// test already holds).
MinimizeResult gradient_descent(const Objective& obj, std::vector<Vec2> init,
                                const MinimizeOptions& opts);

// Multistart driver: run r uses derive_seed(seed, r); starts are uniform in
// the disk D(0, 1.5 * sqrt(N / (pi * background_density))). Best energy wins,
// ties by lowest run index; result independent of thread count.
MinimizeResult multistart_minimize(const PlasmaHamiltonian& h, int n_points,
                                   const MinimizeOptions& opts);

// Multistart over explicit starting configurations (deterministic order).
MinimizeResult multistart_minimize_inits(const Objective& obj,
                                         const std::vector<std::vector<Vec2>>& inits,
                                         const MinimizeOptions& opts);

}  // namespace jellium
