#include <cmath>

#include "doctest.h"
#include "jellium/density.hpp"
#include "jellium/rng.hpp"
#include "jellium/sampler.hpp"

using namespace jellium;

TEST_CASE("single particle in the quadratic trap: gaussian moments") {
  // Stationary weight exp(-beta |x|^2 / T): E|x|^2 = T / beta.
  PlasmaHamiltonian h;
  MetropolisOptions o;
  o.sweeps = 60000;
  o.seed = 11;
  double sum = 0.0;
  long n = 0;
  const ChainStats stats = run_metropolis(h, 1, o, [&](const std::vector<Vec2>& p) {
    sum += norm2(p[0]);
    ++n;
  });
  CHECK(stats.drift_ok);
  CHECK(stats.acceptance > 0.1);
  CHECK(stats.acceptance < 0.7);
  CHECK(n == stats.samples);
  CHECK(sum / n == doctest::Approx(1.0 / h.beta).epsilon(0.03));
}

TEST_CASE("two charges freeze near the ground configuration at low temperature") {
  PlasmaHamiltonian h;
  MetropolisOptions o;
  o.temperature = 1e-3;
  o.sweeps = 30000;
  o.seed = 3;
  double dsum = 0.0;
  long n = 0;
  const ChainStats stats = run_metropolis(h, 2, o, [&](const std::vector<Vec2>& p) {
    dsum += dist(p[0], p[1]);
    ++n;
  });
  CHECK(stats.drift_ok);
  CHECK(dsum / n == doctest::Approx(0.7978845608028654).epsilon(0.02));
}

TEST_CASE("chains are reproducible and audited") {
  PlasmaHamiltonian h;
  h.holes = {{{0.5, 0.0}, 1.0}};
  MetropolisOptions o;
  o.sweeps = 2000;
  o.seed = 7;

  std::vector<Vec2> last_a, last_b;
  const ChainStats a = run_metropolis(h, 6, o,
                                      [&](const std::vector<Vec2>& p) { last_a = p; });
  const ChainStats b = run_metropolis(h, 6, o,
                                      [&](const std::vector<Vec2>& p) { last_b = p; });
  CHECK(a.final_energy == b.final_energy);
  CHECK(a.acceptance == b.acceptance);
  CHECK(a.step == b.step);
  REQUIRE(last_a.size() == last_b.size());
  for (std::size_t i = 0; i < last_a.size(); ++i) {
    CHECK(last_a[i].x == last_b[i].x);
    CHECK(last_a[i].y == last_b[i].y);
  }
  CHECK(a.max_energy_drift <= 1e-8);

  // A different seed decorrelates the endpoint.
  o.seed = 8;
  run_metropolis(h, 6, o, [&](const std::vector<Vec2>& p) { last_b = p; });
  bool same = true;
  for (std::size_t i = 0; i < last_a.size(); ++i)
    same = same && last_a[i].x == last_b[i].x && last_a[i].y == last_b[i].y;
  CHECK_FALSE(same);
}

TEST_CASE("density histogram: normalization, batches, errors") {
  GridSpec g = GridSpec::centered_square(2.0, 1.0);  // 4x4 cells
  DensityEstimate est(g, 1, 8, 4);
  // Two particles per sample, both inside.
  for (int s = 0; s < 8; ++s)
    est.add_sample({{-1.5 + 0.01 * s, -1.5}, {1.2, 1.4}});
  CHECK(est.samples() == 8);
  CHECK(est.integral() == doctest::Approx(2.0).epsilon(1e-12));
  const ScalarField rho = est.density();
  CHECK(rho.integral() == doctest::Approx(2.0).epsilon(1e-12));
  // All mass sits in the two visited cells.
  CHECK(rho.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rho.at(3, 3) == doctest::Approx(1.0).epsilon(1e-12));
  // Constant occupancy: zero batch-to-batch error.
  const ScalarField se = est.standard_error();
  CHECK(se.at(0, 0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  // Pair histogram on one sample: exactly the two ordered pairs.
  DensityEstimate est2(g, 2, 2, 2);
  est2.add_sample({{-1.5, -1.5}, {1.2, 1.4}});
  CHECK(est2.integral() == doctest::Approx(2.0).epsilon(1e-12));
  const std::vector<double> flat = est2.flat_density();
  int nonzero = 0;
  for (double v : flat)
    if (v != 0.0) ++nonzero;
  CHECK(nonzero == 2);
}

TEST_CASE("wilson interval and the overcount probe") {
  const WilsonInterval w = wilson_interval(50, 100);
  CHECK(w.p_hat == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w.low > 0.39);
  CHECK(w.high < 0.61);
  CHECK(w.low < 0.5);
  CHECK(w.high > 0.5);
  const WilsonInterval zero = wilson_interval(0, 50);
  CHECK(zero.p_hat == 0.0);
  CHECK(zero.low < 1e-12);  // clamped at 0 up to rounding
  CHECK(zero.high > 0.0);

  OvercountProbe probe({0.0, 0.0}, 2.0, 0.3, 1.0 / (2.0 * M_PI));
  CHECK(probe.threshold() == doctest::Approx(2.6).epsilon(1e-12));
  probe.add_sample({{0.1, 0.0}, {0.5, 0.5}, {-1.0, 0.2}});  // 3 > 2.6
  probe.add_sample({{0.1, 0.0}, {3.5, 0.0}, {0.0, 5.0}});   // 1 <= 2.6
  const WilsonInterval r = probe.result();
  CHECK(r.trials == 2);
  CHECK(r.p_hat == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("factorization gap: independent pairs small, glued pairs large") {
  GridSpec g = GridSpec::centered_square(1.5, 0.75);  // 4x4 cells
  Rng rng(2024);
  DensityEstimate indep(g, 2, 20000, 20);
  DensityEstimate glued(g, 2, 20000, 20);
  for (int s = 0; s < 20000; ++s) {
    const Vec2 a = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    const Vec2 b = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    indep.add_sample({a, b});
    // Second point glued into the first one's cell.
    glued.add_sample({a, {a.x, a.y}});
  }
  const FactorizationGap gi = factorization_gap(indep, 2, 100, 5);
  const FactorizationGap gg = factorization_gap(glued, 2, 100, 5);
  CHECK(gi.gap < 0.15);
  CHECK(gg.gap > 0.5);
  CHECK(gi.gap + 3 * gi.bootstrap_se < gg.gap);
  CHECK(gi.bootstrap_se > 0.0);
}
