#include <cmath>

#include "doctest.h"
#include "jellium/csvio.hpp"
#include "jellium/kernel.hpp"
#include "jellium/poisson.hpp"
#include "jellium/renorm.hpp"
#include "jellium/smearing.hpp"

using namespace jellium;

namespace {
constexpr double kInvSqrtPi = 0.5641895835477563;
}

TEST_CASE("disk potential: center value, Newton exterior, gradient") {
  // Unit-mass disk (rho = 1, r = 1/sqrt(pi)); value at the center is
  // log(pi)/2 + 1/2.
  const double r = kInvSqrtPi;
  CHECK(disk_potential({0, 0}, r, 1.0, {0, 0}) ==
        doctest::Approx(1.0723649429247001).epsilon(1e-13));

  // Outside, the disk acts as its total mass at the center.
  const Vec2 c = {0.4, -0.7};
  const double rho = 2.3, rr = 0.6;
  const double mass = rho * M_PI * rr * rr;
  for (const Vec2 x : {Vec2{2.0, 1.0}, Vec2{-1.5, 0.3}, Vec2{0.4, -2.9}}) {
    CHECK(disk_potential(c, rr, rho, x) ==
          doctest::Approx(mass * coulomb_kernel(dist(x, c))).epsilon(1e-13));
  }

  // Gradient against central differences, inside and outside.
  for (const Vec2 x : {Vec2{0.5, -0.6}, Vec2{1.7, 0.2}}) {
    const Vec2 g = disk_potential_gradient(c, rr, rho, x);
    const double d = 1e-6;
    const double gx = (disk_potential(c, rr, rho, {x.x + d, x.y}) -
                       disk_potential(c, rr, rho, {x.x - d, x.y})) /
                      (2 * d);
    const double gy = (disk_potential(c, rr, rho, {x.x, x.y + d}) -
                       disk_potential(c, rr, rho, {x.x, x.y - d})) /
                      (2 * d);
    CHECK(g.x == doctest::Approx(gx).epsilon(1e-6));
    CHECK(g.y == doctest::Approx(gy).epsilon(1e-6));
  }
}

TEST_CASE("rectangle potential: quadrature, additivity, gradient") {
  // Exterior point: smooth integrand, Gauss-Legendre is near-exact.
  const Vec2 x = {2.1, 1.4};
  std::vector<double> nu, wu, nv, wv;
  gauss_legendre(24, -0.3, 0.9, nu, wu);
  gauss_legendre(24, -0.5, 0.4, nv, wv);
  double quad = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i)
    for (std::size_t j = 0; j < nv.size(); ++j)
      quad += wu[i] * wv[j] * std::log(dist(x, {nu[i], nv[j]}));
  CHECK(rectangle_log_potential(-0.3, 0.9, -0.5, 0.4, x) ==
        doctest::Approx(quad).epsilon(1e-12));

  // Splitting the rectangle splits the potential, also at interior points.
  for (const Vec2 p : {Vec2{2.1, 1.4}, Vec2{0.2, 0.1}}) {
    const double whole = rectangle_log_potential(-0.3, 0.9, -0.5, 0.4, p);
    const double left = rectangle_log_potential(-0.3, 0.3, -0.5, 0.4, p);
    const double right = rectangle_log_potential(0.3, 0.9, -0.5, 0.4, p);
    CHECK(whole == doctest::Approx(left + right).epsilon(1e-12));
  }

  const Vec2 g = rectangle_log_potential_gradient(-0.3, 0.9, -0.5, 0.4, x);
  const double d = 1e-6;
  CHECK(g.x == doctest::Approx((rectangle_log_potential(-0.3, 0.9, -0.5, 0.4,
                                                        {x.x + d, x.y}) -
                                rectangle_log_potential(-0.3, 0.9, -0.5, 0.4,
                                                        {x.x - d, x.y})) /
                               (2 * d))
                   .epsilon(1e-7));
  CHECK(g.y == doctest::Approx((rectangle_log_potential(-0.3, 0.9, -0.5, 0.4,
                                                        {x.x, x.y + d}) -
                                rectangle_log_potential(-0.3, 0.9, -0.5, 0.4,
                                                        {x.x, x.y - d})) /
                               (2 * d))
                   .epsilon(1e-7));
}

TEST_CASE("cell kernels: scaling law, far-field limit, self value") {
  // -log scales: mean over an h-cell pair = mean over the unit cell - log h.
  CHECK(cell_self_kernel(0.25) ==
        doctest::Approx(cell_self_kernel(1.0) - std::log(0.25)).epsilon(1e-12));

  // Far away the cell average collapses to the point kernel.
  CHECK(cell_pair_kernel({12.0, 5.0}, 0.1) ==
        doctest::Approx(coulomb_kernel(13.0)).epsilon(1e-6));

  // Independent value for the unit-cell self mean: average the exact
  // rectangle potential over the cell with Gauss-Legendre.
  std::vector<double> n1, w1;
  gauss_legendre(48, 0.0, 1.0, n1, w1);
  double mean = 0.0;
  for (std::size_t i = 0; i < n1.size(); ++i)
    for (std::size_t j = 0; j < n1.size(); ++j)
      mean += w1[i] * w1[j] *
              rectangle_log_potential(0.0, 1.0, 0.0, 1.0, {n1[i], n1[j]});
  CHECK(cell_self_kernel(1.0) == doctest::Approx(-mean).epsilon(1e-3));
}

TEST_CASE("mollified point masses are exact") {
  ScalarField f(GridSpec::centered_square(3.0, 0.05));
  mollify_points(f, {{0.3, 0.2}, {-0.8, 0.5}}, {2, 1}, 0.2,
                 SmearingProfile::tent(), false);
  CHECK(f.integral() == doctest::Approx(3.0).epsilon(1e-12));

  // A bump wrapped across the periodic edge still carries its full mass.
  ScalarField p(GridSpec::centered_square(3.0, 0.05));
  mollify_points(p, {{2.95, -2.9}}, {1}, 0.3, SmearingProfile::tent(), true);
  CHECK(p.integral() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(SmearingProfile::tent().mass() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("periodic poisson inverts the five-point stencil") {
  GridSpec g = GridSpec::centered_square(1.0, 2.0 / 32.0);
  ScalarField rhs(g);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const Vec2 p = g.center(ix, iy);
      rhs.at(ix, iy) = std::sin(M_PI * p.x) * std::cos(2.0 * M_PI * p.y) +
                       0.3 * std::cos(M_PI * p.y);
    }
  double mean = 0.0;
  for (double v : rhs.values) mean += v;
  mean /= static_cast<double>(rhs.values.size());

  const ScalarField phi = solve_periodic_poisson(rhs);
  const double h2 = g.h * g.h;
  double worst = 0.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const int xm = (ix + g.nx - 1) % g.nx, xp = (ix + 1) % g.nx;
      const int ym = (iy + g.ny - 1) % g.ny, yp = (iy + 1) % g.ny;
      const double lap = (phi.at(xm, iy) + phi.at(xp, iy) + phi.at(ix, ym) +
                          phi.at(ix, yp) - 4.0 * phi.at(ix, iy)) /
                         h2;
      worst = std::max(worst, std::fabs(-lap - (rhs.at(ix, iy) - mean)));
    }
  CHECK(worst < 1e-10);
}

TEST_CASE("free-boundary convolutions act exactly on a one-cell charge") {
  GridSpec g = GridSpec::centered_square(1.0, 0.125);
  ScalarField rho(g);
  const int cx = 5, cy = 9;
  rho.at(cx, cy) = 3.0;

  const auto kern = [](Vec2 d) { return std::exp(-norm2(d)) + 0.1 * d.x; };
  const ScalarField u = convolve_kernel(rho, kern);
  for (const auto [ix, iy] : {std::pair{0, 0}, {7, 3}, {15, 15}, {cx, cy}}) {
    const Vec2 off = g.center(ix, iy) - g.center(cx, cy);
    CHECK(u.at(ix, iy) ==
          doctest::Approx(3.0 * kern(off) * g.h * g.h).epsilon(1e-9));
  }

  // log_potential_of_density: point kernel beyond the near-field window,
  // cell-averaged kernel at zero offset.
  const ScalarField v = log_potential_of_density(rho);
  const Vec2 far = g.center(14, 1) - g.center(cx, cy);
  CHECK(v.at(14, 1) ==
        doctest::Approx(3.0 * coulomb_kernel(norm(far)) * g.h * g.h)
            .epsilon(1e-9));
  CHECK(v.at(cx, cy) ==
        doctest::Approx(3.0 * cell_self_kernel(g.h) * g.h * g.h).epsilon(1e-9));
}

TEST_CASE("renormalization constants and estimator") {
  // gamma2 is c2 times the profile self-energy; recompute the self-energy
  // independently from the radial potential.
  const SmearingProfile tent = SmearingProfile::tent();
  const RenormConstants rc = RenormConstants::for_profile(tent);
  CHECK(rc.kappa2 == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
  std::vector<double> ns, ws;
  gauss_legendre(64, 0.0, 1.0, ns, ws);
  double self = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i)
    self += ws[i] * 2.0 * M_PI * ns[i] * tent.radial(ns[i]) * tent.potential(ns[i]);
  CHECK(rc.gamma2 == doctest::Approx(2.0 * M_PI * self).epsilon(1e-8));

  // Empty configuration with no background: identically zero field.
  const RenormEstimate empty = renormalized_energy_estimate({}, {}, 0.0, 0.4, 8.0);
  CHECK(empty.value == 0.0);

  // Translating a configuration by whole cells leaves the periodic energy
  // unchanged.
  RenormOptions opts;
  const RenormEstimate a =
      renormalized_energy_estimate({{0.0, 0.0}, {1.0, 0.5}}, {1, 1}, 2.0 / 64.0,
                                   0.5, 8.0, opts);
  const RenormEstimate b = renormalized_energy_estimate(
      {{0.5, -0.25}, {1.5, 0.25}}, {1, 1}, 2.0 / 64.0, 0.5, 8.0, opts);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-9));
  CHECK_FALSE(a.eta_overlap_warning);

  // Estimates settle as the smearing radius halves (6x6 unit lattice).
  std::vector<Vec2> pts;
  std::vector<int> mults;
  for (int iy = 0; iy < 6; ++iy)
    for (int ix = 0; ix < 6; ++ix) {
      pts.push_back({-3.0 + ix + 0.5, -3.0 + iy + 0.5});
      mults.push_back(1);
    }
  std::vector<double> vals;
  for (double eta : {0.4, 0.2, 0.1})
    vals.push_back(
        renormalized_energy_estimate(pts, mults, 1.0, eta, 6.0, opts).value);
  CHECK(std::fabs(vals[2] - vals[1]) < std::fabs(vals[1] - vals[0]));
}

TEST_CASE("csv formatting") {
  CHECK(format_double(0.1) == "0.1");
  const double pi = 3.141592653589793;
  CHECK(std::stod(format_double(pi)) == pi);

  CHECK(csv_record({"a", "b,c", "d\"e"}) == "a,\"b,c\",\"d\"\"e\"\n");

  ScalarField f(GridSpec::centered_square(1.0, 1.0));
  f.at(0, 0) = 1.5;
  const std::string csv = field_to_csv(f);
  CHECK(csv.find("# origin,") == 0);
  CHECK(csv.find("# h,") != std::string::npos);
  CHECK(csv.find("# nx ny,2,2") != std::string::npos);
  CHECK(csv.find("ix,iy,value") != std::string::npos);
  CHECK(csv.find("0,0,1.5") != std::string::npos);
}
