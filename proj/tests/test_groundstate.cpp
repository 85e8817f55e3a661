#include <cmath>

#include "doctest.h"
#include "jellium/analysis.hpp"
#include "jellium/kernel.hpp"
#include "jellium/minimize.hpp"
#include "jellium/thermo.hpp"

using namespace jellium;

TEST_CASE("one and two charges: closed-form minimizers") {
  PlasmaHamiltonian h;  // beta = pi/2
  MinimizeOptions o;
  o.multistart_runs = 4;

  const MinimizeResult one = multistart_minimize(h, 1, o);
  CHECK(one.converged);
  CHECK(norm(one.points[0]) < 1e-5);
  CHECK(std::fabs(one.energy) < 1e-9);

  // Two charges sit symmetrically at separation 1/sqrt(beta) with energy
  // 1/2 + log(beta)/2.
  const MinimizeResult two = multistart_minimize(h, 2, o);
  CHECK(two.converged);
  const double d = dist(two.points[0], two.points[1]);
  CHECK(d == doctest::Approx(0.7978845608028654).epsilon(1e-6));
  CHECK(two.energy ==
        doctest::Approx(0.5 + 0.5 * std::log(h.beta)).epsilon(1e-10));
  CHECK(norm(two.points[0] + two.points[1]) < 1e-5);
}

TEST_CASE("multistart is deterministic and thread-count independent") {
  PlasmaHamiltonian h;
  MinimizeOptions o;
  o.multistart_runs = 4;
  o.max_iterations = 4000;
  o.gradient_tolerance = 1e-6;
  o.seed = 42;

  const MinimizeResult a = multistart_minimize(h, 8, o);
  const MinimizeResult b = multistart_minimize(h, 8, o);
  o.threads = 3;
  const MinimizeResult c = multistart_minimize(h, 8, o);

  CHECK(a.energy == b.energy);
  CHECK(a.energy == c.energy);
  CHECK(a.best_run == c.best_run);
  REQUIRE(a.points.size() == c.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].x == c.points[i].x);
    CHECK(a.points[i].y == c.points[i].y);
  }
}

TEST_CASE("descent respects a feasible region") {
  PlasmaHamiltonian h;
  Objective obj = make_objective(h);
  obj.feasible = [](Vec2 p) { return norm(p) <= 0.2; };  // tighter than free
  MinimizeOptions o;
  o.multistart_runs = 1;
  const MinimizeResult m = multistart_minimize_inits(
      obj, {{{0.1, 0.0}, {-0.1, 0.0}, {0.0, 0.1}}}, o);
  for (const Vec2& p : m.points) CHECK(norm(p) <= 0.2 + 1e-12);
}

TEST_CASE("bulk separation report on a hand-built lattice") {
  // 3x3 unit lattice: the center is the only point deeper than 0.5 in the
  // hull; its nearest neighbor is at distance 1.
  std::vector<Vec2> pts;
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) pts.push_back({1.0 * i, 1.0 * j});

  const SeparationReport rep = min_pair_distance(pts, 0.5, 0.9);
  CHECK(rep.bulk_count == 1);
  CHECK(rep.min_bulk_distance == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.violations.empty());

  const SeparationReport strict = min_pair_distance(pts, 0.5, 1.1);
  CHECK(strict.violations.size() == 1);

  // No bulk points at huge margin: the minimum degenerates to +infinity.
  const SeparationReport none = min_pair_distance(pts, 10.0, 0.9);
  CHECK(none.bulk_count == 0);
  CHECK(std::isinf(none.min_bulk_distance));
}

TEST_CASE("disk counts and incompressibility scan on the unit lattice") {
  PointConfiguration c;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      c.points.push_back({i - 4.5, j - 4.5});
      c.multiplicities.push_back(1);
    }

  CHECK(disk_count(c, {0.0, 0.0}, 0.8) == 4);   // the four inner sites
  CHECK(disk_count(c, {-4.5, -4.5}, 0.1) == 1);  // a corner site

  const IncompressibilityReport rep =
      incompressibility_report(c, {3.0}, 0.0, 0.5);
  CHECK(rep.centers_tested > 0);
  // Unit-density lattice: local counts track pi R^2 within the perimeter
  // term. Offset centers reach 32 points in pi 3^2 = 28.27, ratio 1.132.
  CHECK(rep.max_ratio <= 1.14);
  CHECK(rep.max_ratio >= 1.0);
}

TEST_CASE("hard-wall containers: geometry, potentials, energies") {
  const ContainerSpec square{ContainerSpec::Kind::Square, 2.0};
  const ContainerSpec disk{ContainerSpec::Kind::Disk, 0.75};
  CHECK(square.area() == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(disk.area() == doctest::Approx(M_PI * 0.5625).epsilon(1e-14));
  CHECK(square.contains({0.99, -0.99}));
  CHECK_FALSE(square.contains({1.01, 0.0}));
  CHECK(disk.contains({0.5, 0.5}));
  CHECK_FALSE(disk.contains({0.7, 0.4}));

  // The square background potential is the exact rectangle integral.
  const Vec2 x = {0.3, -0.2};
  CHECK(background_potential(square, 1.3, x) ==
        doctest::Approx(1.3 * rectangle_log_potential(-1, 1, -1, 1, x))
            .epsilon(1e-12));

  // Disk background: gradient matches central differences inside.
  const Vec2 g = background_potential_gradient(disk, 2.0, {0.2, 0.3});
  const double d = 1e-6;
  CHECK(g.x == doctest::Approx((background_potential(disk, 2.0, {0.2 + d, 0.3}) -
                                background_potential(disk, 2.0, {0.2 - d, 0.3})) /
                               (2 * d))
                   .epsilon(1e-6));
  CHECK(g.y == doctest::Approx((background_potential(disk, 2.0, {0.2, 0.3 + d}) -
                                background_potential(disk, 2.0, {0.2, 0.3 - d})) /
                               (2 * d))
                   .epsilon(1e-6));

  // One charge at the center of the unit-mass disk: the pair term is empty,
  // so the jellium energy is V(0) = rho * 2 pi int_0^R log(s) s ds.
  const double rho = 1.0 / disk.area();
  const double R = disk.size;
  const double v0 = rho * 2.0 * M_PI * (0.5 * R * R * std::log(R) - 0.25 * R * R);
  CHECK(jellium_energy(disk, rho, {{0.0, 0.0}}) ==
        doctest::Approx(v0).epsilon(1e-12));

  // Background self-energy cross-check for the unit disk, rho = 1:
  // (rho^2/2) iint -log = 0.5 * int_disk (-V), done radially.
  std::vector<double> ns, ws;
  gauss_legendre(64, 0.0, 1.0, ns, ws);
  double self = 0.0;
  const ContainerSpec unit{ContainerSpec::Kind::Disk, 1.0};
  for (std::size_t i = 0; i < ns.size(); ++i)
    self += ws[i] * 2.0 * M_PI * ns[i] *
            (-background_potential(unit, 1.0, {ns[i], 0.0}));
  CHECK(background_self_energy(unit, 1.0) == doctest::Approx(0.5 * self).epsilon(1e-8));
}

TEST_CASE("energy density scan runs on a small square") {
  ThermoOptions o;
  o.multistart_runs = 2;
  o.inner.gradient_tolerance = 1e-6;
  const ThermoPoint pt = energy_per_volume({ContainerSpec::Kind::Square, 2.0},
                                           1.0, o);
  CHECK(pt.n_points == 4);
  CHECK(pt.converged);
  CHECK(std::isfinite(pt.energy_per_area));
  // All charges stayed inside the hard wall.
  CHECK(pt.size == 2.0);
}
