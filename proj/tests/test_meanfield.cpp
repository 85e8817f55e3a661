#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "jellium/density.hpp"
#include "jellium/hamiltonian.hpp"
#include "jellium/meanfield.hpp"
#include "jellium/rng.hpp"
#include "jellium/sampler.hpp"

using namespace jellium;

namespace {
ScalarField quadratic(double half, double h, double coeff) {
  ScalarField v(GridSpec::centered_square(half, h));
  for (int iy = 0; iy < v.grid.ny; ++iy)
    for (int ix = 0; ix < v.grid.nx; ++ix)
      v.at(ix, iy) = coeff * norm2(v.grid.center(ix, iy));
  return v;
}

double half_filled_radius(const ScalarField& rho, double rho_max) {
  double area = 0.0;
  for (double q : rho.values)
    if (q > 0.5 * rho_max) area += rho.grid.h * rho.grid.h;
  return std::sqrt(area / M_PI);
}
}  // namespace

TEST_CASE("bathtub fill: disk radius, exact mass, box constraint") {
  const double rho_max = 1.0 / (2.0 * M_PI);
  const double mass = 10.0;
  const ScalarField v = quadratic(5.5, 0.05, 1.0);
  const ScalarField rho = bathtub_solve(v, rho_max, mass);

  CHECK(rho.integral() == doctest::Approx(mass).epsilon(1e-10));
  for (double q : rho.values) {
    CHECK(q >= 0.0);
    CHECK(q <= rho_max + 1e-15);
  }
  CHECK(half_filled_radius(rho, rho_max) ==
        doctest::Approx(std::sqrt(2.0 * mass)).epsilon(0.02));
}

TEST_CASE("bathtub fill: the deeper of two wells fills first") {
  ScalarField v(GridSpec::centered_square(4.0, 0.05));
  for (int iy = 0; iy < v.grid.ny; ++iy)
    for (int ix = 0; ix < v.grid.nx; ++ix) {
      const Vec2 p = v.grid.center(ix, iy);
      const double right = norm2(p - Vec2{2.0, 0.0});
      const double left = 0.5 + norm2(p + Vec2{2.0, 0.0});
      v.at(ix, iy) = std::min(right, left);
    }
  // Mass 0.2 fills the right well to level 0.4, below the left minimum 0.5.
  const double rho_max = 1.0 / (2.0 * M_PI);
  const ScalarField rho = bathtub_solve(v, rho_max, 0.2);
  double left_mass = 0.0, total = 0.0;
  for (int iy = 0; iy < rho.grid.ny; ++iy)
    for (int ix = 0; ix < rho.grid.nx; ++ix) {
      const double m = rho.at(ix, iy) * rho.grid.h * rho.grid.h;
      total += m;
      if (rho.grid.center(ix, iy).x < 0.0) left_mass += m;
    }
  CHECK(total == doctest::Approx(0.2).epsilon(1e-10));
  CHECK(left_mass < 1e-12);
}

TEST_CASE("projection onto the constrained box: exactness and optimality") {
  const double rho_max = 0.5;
  const double mass = 3.0;
  GridSpec g = GridSpec::centered_square(2.0, 0.25);
  ScalarField z(g);
  Rng rng(99);
  for (auto& q : z.values) q = rng.uniform(-1.0, 1.5);

  const ScalarField p = project_to_box_mass(z, rho_max, mass);
  CHECK(p.integral() == doctest::Approx(mass).epsilon(1e-9));
  for (double q : p.values) {
    CHECK(q >= -1e-15);
    CHECK(q <= rho_max + 1e-15);
  }

  // Any feasible competitor is no closer to z.
  const auto dist2 = [&](const ScalarField& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
      s += (a.values[i] - z.values[i]) * (a.values[i] - z.values[i]);
    return s;
  };
  ScalarField flat(g);
  const double fill = mass / (g.size() * g.h * g.h);
  for (auto& q : flat.values) q = fill;
  CHECK(dist2(p) <= dist2(flat) + 1e-9);

  // Projecting a feasible point returns it.
  const ScalarField again = project_to_box_mass(p, rho_max, mass);
  double moved = 0.0;
  for (std::size_t i = 0; i < p.values.size(); ++i)
    moved = std::max(moved, std::fabs(again.values[i] - p.values[i]));
  CHECK(moved < 1e-9);
}

TEST_CASE("flocking at lambda 0 reproduces the direct fill exactly") {
  FlockingProblem p;
  p.v = quadratic(4.0, 0.0625, 1.0);
  p.rho_max = 1.0 / (2.0 * M_PI);
  p.mass = 5.0;
  p.lambda = 0.0;
  p.w = [](Vec2 d) { return std::exp(-0.5 * norm2(d)); };
  p.w_positive_type = true;

  FlockingOptions o;
  o.tolerance = 1e-10;
  o.max_iterations = 5000;
  const FlockingResult f = flocking_solve(p, o);
  CHECK(f.converged);

  const ScalarField bt = bathtub_solve(p.v, p.rho_max, p.mass);
  double l1 = 0.0;
  for (std::size_t i = 0; i < bt.values.size(); ++i)
    l1 += std::fabs(bt.values[i] - f.density.values[i]) * p.v.grid.h * p.v.grid.h;
  CHECK(l1 <= 1e-8);
  CHECK(f.energy == doctest::Approx(flocking_energy(p, bt)).epsilon(1e-10));
  CHECK(f.saturated_fraction > 0.99);
}

TEST_CASE("flocking with repulsion: beats the fill, saturates, spreads") {
  FlockingProblem p;
  p.v = quadratic(4.5, 0.0625, 1.0);
  p.rho_max = 1.0 / (2.0 * M_PI);
  p.mass = 5.0;
  p.w = [](Vec2 d) { return std::exp(-0.5 * norm2(d)); };
  p.w_positive_type = true;

  FlockingOptions o;
  o.tolerance = 1e-7;
  o.max_iterations = 4000;

  p.lambda = 0.5;
  const FlockingResult f = flocking_solve(p, o);
  CHECK(f.converged);
  CHECK(f.saturated_fraction >= 0.95);

  // The solution is at least as good as the interaction-blind fill.
  const ScalarField bt = bathtub_solve(p.v, p.rho_max, p.mass);
  CHECK(f.energy <= flocking_energy(p, bt) + 1e-6);

  p.lambda = 1.0;
  const FlockingResult g = flocking_solve(p, o);
  const double cell = p.v.grid.h * p.v.grid.h;
  CHECK(g.support_area >= f.support_area - cell);
}

TEST_CASE("equilibrium measure of the quadratic trap is the uniform disk") {
  EquilibriumOptions o;
  const ScalarField v = quadratic(2.2, 0.023, 0.25);
  const EquilibriumResult eq = meanfield_equilibrium(v, 1.0, o);
  CHECK(eq.converged);

  const double rho_target = 1.0 / (2.0 * M_PI);
  // Interior cells sit exactly on the discrete balance 2 pi rho = Lap v = 1.
  CHECK(eq.density.sample({0.0, 0.0}) == doctest::Approx(rho_target).epsilon(1e-6));
  CHECK(eq.density.sample({0.5, -0.3}) == doctest::Approx(rho_target).epsilon(1e-6));
  CHECK(eq.density.integral() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(half_filled_radius(eq.density, rho_target) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(0.02));

  // Chemical potential of the uniform unit-mass disk of radius sqrt(2):
  // mu = (C * rho)(0) = 1/2 - log(R) with R^2 = 2.
  CHECK(std::fabs(eq.mu - 0.15342640972002733) < 1e-3);

  // A potential with its minimum on the border is rejected.
  ScalarField bad(GridSpec::centered_square(1.0, 0.1));
  for (int iy = 0; iy < bad.grid.ny; ++iy)
    for (int ix = 0; ix < bad.grid.nx; ++ix)
      bad.at(ix, iy) = -norm2(bad.grid.center(ix, iy));
  CHECK_THROWS_AS(meanfield_equilibrium(bad, 1.0, o), std::invalid_argument);
}

TEST_CASE("sampled one-point density approaches the mean-field profile") {
  // Reduced Laughlin plasma (ell = 1, B = 1), N = 64, positions shrunk by
  // sqrt(N): the droplet becomes the unit-mass disk of radius 1/sqrt(pi),
  // which is also the equilibrium measure of v(y) = (pi/2) |y|^2.
  const int n = 64;
  const LaughlinMap map = laughlin_to_plasma(1.0, 1.0);
  MetropolisOptions mo;
  mo.temperature = 0.5;
  mo.sweeps = 30000;
  mo.seed = 17;

  GridSpec g = GridSpec::centered_square(0.8, 0.1);
  DensityEstimate est(g, 1, 24000, 20);
  const double shrink = 1.0 / std::sqrt(static_cast<double>(n));
  const ChainStats stats =
      run_metropolis(map.reduced, n, mo, [&](const std::vector<Vec2>& pts) {
        std::vector<Vec2> y(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) y[i] = shrink * pts[i];
        est.add_sample(y);
      });
  CHECK(stats.drift_ok);
  CHECK(stats.samples == 24000);

  const EquilibriumResult eq =
      meanfield_equilibrium(quadratic(0.8, 0.05, M_PI / 2.0), 1.0, {});
  CHECK(eq.converged);

  // Per-particle histogram against the equilibrium density in L1. The budget
  // covers the finite-N edge smearing plus histogram noise; a wrong droplet
  // radius or normalization lands far outside it.
  const ScalarField rho = est.density();
  double l1 = 0.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      l1 += std::fabs(rho.at(ix, iy) / n - eq.density.sample(g.center(ix, iy))) *
            g.h * g.h;
  CHECK(l1 < 0.2);
}
