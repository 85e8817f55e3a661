#include <cmath>

#include "doctest.h"
#include "jellium/balayage.hpp"
#include "jellium/lcp.hpp"
#include "jellium/smearing.hpp"

using namespace jellium;

namespace {
constexpr double kInvSqrtPi = 0.5641895835477563;

double support_radius_about(const BalayageSolution& sol, Vec2 center) {
  double r = 0.0;
  const GridSpec& g = sol.phi.grid;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      if (sol.sigma_at(ix, iy))
        r = std::max(r, dist(g.center(ix, iy), center));
  return r;
}
}  // namespace

TEST_CASE("complementarity solver: trivial obstacle and invariants") {
  GridSpec g = GridSpec::centered_square(1.0, 0.1);
  ScalarField phi(g);
  for (auto& v : phi.values) v = 0.5;  // infeasible warm start is fine
  std::vector<double> f(g.size(), -1.0);
  const LcpResult res = psor_solve(phi, f, {}, {});
  CHECK(res.converged);
  // f < 0 admits phi = 0 with A phi - f > 0: the contact set is everything.
  for (double v : phi.values) CHECK(std::fabs(v) < 1e-9);
}

TEST_CASE("single charge screens to the unit disk") {
  PointConfiguration c = PointConfiguration::from_points({{0.2, -0.1}});
  BalayageOptions o;  // h = 0.02
  const BalayageSolution sol = partial_balayage(c, o);
  CHECK(sol.converged);
  CHECK(sol.area == doctest::Approx(1.0).epsilon(0.01));
  CHECK(support_radius_about(sol, c.points[0]) ==
        doctest::Approx(kInvSqrtPi).epsilon(0.02));
  CHECK(exterior_max_ratio(sol) <= 1e-3);

  // Complementarity at the solution: phi >= 0, q >= -tol, phi * q small.
  const GridSpec& g = sol.phi.grid;
  std::vector<double> f(g.size());
  ScalarField mu(g);
  mollify_points(mu, c.points, c.multiplicities, o.mollify_radius_cells * o.h,
                 SmearingProfile::tent(), false);
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = 2.0 * M_PI * (mu.values[i] - 1.0);
  const std::vector<double> q = lcp_residual_field(sol.phi, f);
  double worst_neg = 0.0, worst_prod = 0.0;
  for (int iy = 1; iy < g.ny - 1; ++iy)
    for (int ix = 1; ix < g.nx - 1; ++ix) {
      const std::size_t i = g.index(ix, iy);
      CHECK(sol.phi.values[i] >= 0.0);
      worst_neg = std::min(worst_neg, q[i]);
      worst_prod = std::max(worst_prod, sol.phi.values[i] * q[i]);
    }
  CHECK(worst_neg > -1e-6);
  CHECK(worst_prod < 1e-6);
}

TEST_CASE("doubled charge widens the disk by sqrt(2)") {
  PointConfiguration c;
  c.points = {{0.0, 0.0}};
  c.multiplicities = {2};
  BalayageOptions o;
  const BalayageSolution sol = partial_balayage(c, o);
  CHECK(sol.converged);
  CHECK(sol.area == doctest::Approx(2.0).epsilon(0.01));
  CHECK(support_radius_about(sol, c.points[0]) ==
        doctest::Approx(0.7978845608028654).epsilon(0.02));
}

TEST_CASE("distant charges screen independently") {
  PointConfiguration c = PointConfiguration::from_points({{-1.5, 0.0}, {1.5, 0.0}});
  BalayageOptions o;
  const BalayageSolution sol = partial_balayage(c, o);
  CHECK(sol.converged);
  CHECK(sol.area == doctest::Approx(2.0).epsilon(0.01));
  int mx = 0, my = 0;
  REQUIRE(sol.phi.grid.locate({0.0, 0.0}, mx, my));
  CHECK(!sol.sigma_at(mx, my));  // midpoint stays uncovered
  CHECK(exterior_max_ratio(sol) <= 1e-3);

  const SupportBoundReport bound = support_bound(sol, 1.5 + 0.25);
  CHECK(bound.satisfied);

  // The containment bound is meaningful: measured radius close to it.
  CHECK(bound.measured > 1.5);
  CHECK(bound.measured <= bound.bound + sol.phi.grid.h);
}

TEST_CASE("thomas-fermi energy is smallest at the screening radius") {
  PointConfiguration c = PointConfiguration::from_points({{0.0, 0.0}});
  BalayageOptions o;
  o.h = 0.025;
  const BalayageSolution sol = partial_balayage(c, o);

  const auto disk_energy = [&](double r) {
    ScalarField sigma(sol.phi.grid);
    for (int iy = 0; iy < sigma.grid.ny; ++iy)
      for (int ix = 0; ix < sigma.grid.nx; ++ix)
        sigma.at(ix, iy) = norm(sigma.grid.center(ix, iy)) <= r ? 1.0 : 0.0;
    return tf_energy_of_density(sigma, c.points, c.multiplicities);
  };
  const double at = disk_energy(kInvSqrtPi);
  CHECK(at < disk_energy(0.85 * kInvSqrtPi));
  CHECK(at < disk_energy(1.15 * kInvSqrtPi));
  // The solved region does at least as well as the ideal-disk rasterization.
  CHECK(tf_energy(sol) <= at + 1e-3);
}

TEST_CASE("exclusion: separated points are clean, planted intruder is caught") {
  PointConfiguration c = PointConfiguration::from_points({{0.0, 0.0}, {3.0, 0.0}});
  BalayageOptions o;
  o.h = 0.04;
  const ExclusionReport clean = exclusion_check(c, {0}, o);
  CHECK(clean.violations.empty());
  CHECK(clean.area == doctest::Approx(1.0).epsilon(0.025));

  PointConfiguration tight = PointConfiguration::from_points({{0.0, 0.0}, {0.2, 0.0}});
  const ExclusionReport caught = exclusion_check(tight, {0}, o);
  REQUIRE(caught.violations.size() == 1);
  CHECK(caught.violations[0] == 1);
}

TEST_CASE("region boundary and disk cover describe the single-charge disk") {
  PointConfiguration c = PointConfiguration::from_points({{0.0, 0.0}});
  BalayageOptions o;
  o.h = 0.02;
  const BalayageSolution sol = partial_balayage(c, o);

  const auto polys = region_boundary(sol);
  REQUIRE(polys.size() == 1);
  CHECK(polys[0].size() > 20);
  for (const Vec2& v : polys[0]) {
    CHECK(norm(v) > kInvSqrtPi - 3 * o.h);
    CHECK(norm(v) < kInvSqrtPi + 3 * o.h);
  }

  const DiskCoverReport cover = union_of_disks_diagnostic(sol);
  CHECK(!cover.centers.empty());
  CHECK(cover.uncovered_fraction <= 0.05);
}

TEST_CASE("screening solve is bitwise repeatable") {
  PointConfiguration c = PointConfiguration::from_points({{0.4, 0.3}, {-0.6, 0.1}});
  BalayageOptions o;
  o.h = 0.04;
  const BalayageSolution a = partial_balayage(c, o);
  const BalayageSolution b = partial_balayage(c, o);
  CHECK(a.area == b.area);
  CHECK(a.residual == b.residual);
  REQUIRE(a.phi.values.size() == b.phi.values.size());
  CHECK(a.phi.values == b.phi.values);
  CHECK(a.sigma.values == b.sigma.values);
}
