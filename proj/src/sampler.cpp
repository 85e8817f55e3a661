#include "jellium/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "jellium/rng.hpp"

namespace jellium {

ChainStats run_metropolis(const PlasmaHamiltonian& h, int n_particles,
                          const MetropolisOptions& opts, const SampleSink& sink,
                          const std::vector<Vec2>* init) {
  h.validate();
  if (n_particles < 1) throw std::invalid_argument("run_metropolis: N < 1");
  if (!(opts.temperature > 0.0))
    throw std::invalid_argument("run_metropolis: temperature <= 0");
  if (opts.sweeps < 1) throw std::invalid_argument("run_metropolis: sweeps < 1");

  Rng rng(opts.seed);
  std::vector<Vec2> x;
  if (init) {
    if (static_cast<int>(init->size()) != n_particles)
      throw std::invalid_argument("run_metropolis: init size mismatch");
    x = *init;
  } else {
    const double radius =
        1.2 * std::sqrt(n_particles / (M_PI * h.background_density()));
    while (static_cast<int>(x.size()) < n_particles) {
      const Vec2 p{rng.uniform(-radius, radius), rng.uniform(-radius, radius)};
      if (norm2(p) > radius * radius) continue;
      bool clash = false;
      for (const Vec2& q : x)
        if (dist(p, q) < 1e-9) { clash = true; break; }
      if (!clash) x.push_back(p);
    }
  }

  double energy = plasma_energy(h, x);
  if (!std::isfinite(energy))
    throw std::domain_error("run_metropolis: infinite energy at start");

  const long burnin = static_cast<long>(opts.burnin_fraction * opts.sweeps);
  const long thin = opts.thinning_moves > 0 ? opts.thinning_moves
                                            : static_cast<long>(n_particles);
  double step = opts.initial_step;

  ChainStats stats;
  long tune_accepted = 0, tune_proposed = 0;
  long rec_accepted = 0, rec_proposed = 0;
  long moves_since_sample = 0;

  for (long sweep = 0; sweep < opts.sweeps; ++sweep) {
    const bool recording = sweep >= burnin;
    for (int mv = 0; mv < n_particles; ++mv) {
      const std::size_t j = static_cast<std::size_t>(rng.below(n_particles));
      const Vec2 to{x[j].x + step * rng.normal(), x[j].y + step * rng.normal()};
      const double dE = plasma_energy_delta(h, x, j, to);
      bool accept = false;
      if (dE <= 0.0) {
        accept = true;
      } else if (std::isfinite(dE)) {
        accept = rng.uniform() < std::exp(-dE / opts.temperature);
      }
      if (accept) {
        x[j] = to;
        energy += dE;
      }
      if (recording) {
        rec_proposed++;
        rec_accepted += accept;
        if (++moves_since_sample >= thin) {
          moves_since_sample = 0;
          ++stats.samples;
          if (sink) sink(x);
        }
      } else {
        tune_proposed++;
        tune_accepted += accept;
      }
    }
    // Step tuning, burn-in only; frozen afterwards.
    if (!recording && tune_proposed >= 50L * n_particles) {
      const double acc = static_cast<double>(tune_accepted) / tune_proposed;
      if (acc < opts.accept_low) step *= 0.8;
      else if (acc > opts.accept_high) step *= 1.25;
      tune_accepted = tune_proposed = 0;
    }
    if ((sweep + 1) % opts.recompute_interval == 0) {
      const double full = plasma_energy(h, x);
      const double drift = std::fabs(energy - full) / std::max(1.0, std::fabs(full));
      stats.max_energy_drift = std::max(stats.max_energy_drift, drift);
      energy = full;
    }
  }
  stats.acceptance =
      rec_proposed > 0 ? static_cast<double>(rec_accepted) / rec_proposed : 0.0;
  stats.step = step;
  stats.drift_ok = stats.max_energy_drift <= 1e-8;
  stats.final_energy = plasma_energy(h, x);
  return stats;
}

}  // namespace jellium
