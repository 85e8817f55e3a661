#include <cmath>

#include "doctest.h"
#include "jellium/hamiltonian.hpp"

using namespace jellium;

TEST_CASE("plasma energy: closed-form instances and coincidence signal") {
  PlasmaHamiltonian h;  // beta = pi/2, g = 1
  const std::vector<Vec2> pair = {{0, 0}, {1, 0}};
  CHECK(plasma_energy(h, pair) == doctest::Approx(h.beta).epsilon(1e-14));

  PlasmaHamiltonian withhole = h;
  withhole.holes = {{{-1.0, 0.0}, 2.0}};
  // Hole contribution: -2 log 1 - 2 log 2.
  CHECK(plasma_energy(withhole, pair) ==
        doctest::Approx(h.beta - 2.0 * std::log(2.0)).epsilon(1e-14));

  CHECK(std::isinf(plasma_energy(h, {{0.2, 0.1}, {0.2, 0.1}})));
  CHECK(std::isinf(plasma_energy(withhole, {{-1.0, 0.0}, {1.0, 0.0}})));
  CHECK(h.background_density() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("gradient matches central differences; moves match energy deltas") {
  PlasmaHamiltonian h;
  h.beta = 0.8;
  h.g = 1.7;
  h.holes = {{{0.5, -0.3}, 1.2}};
  const std::vector<Vec2> pts = {{0, 0.9}, {-1.1, 0.2}, {0.7, 1.3}, {-0.4, -1.0}};

  const std::vector<Vec2> grad = plasma_gradient(h, pts);
  const double d = 1e-6;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int axis = 0; axis < 2; ++axis) {
      std::vector<Vec2> a = pts, b = pts;
      (axis ? a[i].y : a[i].x) += d;
      (axis ? b[i].y : b[i].x) -= d;
      const double fd = (plasma_energy(h, a) - plasma_energy(h, b)) / (2 * d);
      CHECK((axis ? grad[i].y : grad[i].x) == doctest::Approx(fd).epsilon(1e-6));
    }
  }

  const Vec2 to = {0.15, -0.55};
  std::vector<Vec2> moved = pts;
  moved[2] = to;
  CHECK(plasma_energy_delta(h, pts, 2, to) ==
        doctest::Approx(plasma_energy(h, moved) - plasma_energy(h, pts))
            .epsilon(1e-11));
}

TEST_CASE("laughlin reduction: parameters and affine energy identity") {
  const std::vector<QuasiHole> holes = {{{1.2, -0.6}, 2.0}};
  const LaughlinMap map = laughlin_to_plasma(1.0, 1.0, holes);

  CHECK(map.scale == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-15));
  CHECK(map.original.beta == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(map.original.g == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(map.reduced.beta == doctest::Approx(M_PI / 2.0).epsilon(1e-15));
  CHECK(map.reduced.g == doctest::Approx(1.0).epsilon(1e-15));
  REQUIRE(map.reduced.holes.size() == 1);
  CHECK(map.reduced.holes[0].coefficient == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(map.reduced.holes[0].position.x ==
        doctest::Approx(1.2 / map.scale).epsilon(1e-15));
  CHECK(map.reduced.background_density() == doctest::Approx(1.0).epsilon(1e-15));

  // original(scale * x) / (2 ell) - reduced(x) is the same constant for any x.
  const auto shift = [&](const std::vector<Vec2>& xs) {
    std::vector<Vec2> zs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) zs[i] = map.scale * xs[i];
    return plasma_energy(map.original, zs) / 2.0 - plasma_energy(map.reduced, xs);
  };
  const double c1 = shift({{0.3, 0.1}, {-0.8, 0.5}, {0.9, -1.1}});
  const double c2 = shift({{-1.4, 0.2}, {0.6, 0.7}, {0.1, -0.3}});
  CHECK(c1 == doctest::Approx(c2).epsilon(1e-11));
}

TEST_CASE("superharmonicity probe: hole potentials pass, a well fails") {
  const std::vector<QuasiHole> holes = {{{0.0, 0.0}, 2.0}, {{1.5, 0.5}, 1.0}};
  const auto w = hole_potential(holes);
  const std::vector<DiskSpec> disks = {{{0.7, 0.0}, 0.3},
                                       {{-1.0, -1.0}, 0.5},
                                       {{0.0, 0.0}, 0.2}};
  const SuperharmonicityReport rep =
      superharmonicity_check(w, hole_singularities(holes), disks);
  CHECK(rep.passed);
  REQUIRE(rep.skipped.size() == 1);  // the disk straddling the origin hole
  CHECK(rep.skipped[0] == 2);

  const SuperharmonicityReport bad = superharmonicity_check(
      [](Vec2 p) { return norm2(p); }, {}, {{{0.2, 0.1}, 0.4}});
  CHECK_FALSE(bad.passed);
  CHECK(bad.worst_margin < 0.0);
}

TEST_CASE("plasma text form round-trips bitwise") {
  PlasmaHamiltonian h;
  h.beta = std::nextafter(1.5707963267948966, 2.0);
  h.g = 1.0 / 3.0;
  h.holes = {{{std::sqrt(2.0), -std::sqrt(3.0)}, 0.123456789012345678}};
  PointConfiguration c;
  c.points = {{M_PI, -M_E}, {0.1, 0.3}};
  c.multiplicities = {2, 1};

  PlasmaHamiltonian h2;
  PointConfiguration c2;
  plasma_from_text(plasma_to_text(h, c), h2, c2);
  CHECK(h2.beta == h.beta);
  CHECK(h2.g == h.g);
  REQUIRE(h2.holes.size() == 1);
  CHECK(h2.holes[0].position.x == h.holes[0].position.x);
  CHECK(h2.holes[0].position.y == h.holes[0].position.y);
  CHECK(h2.holes[0].coefficient == h.holes[0].coefficient);
  REQUIRE(c2.points.size() == 2);
  CHECK(c2.points[0].x == c.points[0].x);
  CHECK(c2.points[0].y == c.points[0].y);
  CHECK(c2.multiplicities == c.multiplicities);
}
