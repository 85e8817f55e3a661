#pragma once
#include <cstdint>
#include <functional>

#include "jellium/hamiltonian.hpp"

namespace jellium {

struct MetropolisOptions {
  double temperature = 1.0;
  long sweeps = 20000;            // total; the first burnin_fraction discarded
  double burnin_fraction = 0.2;
  long thinning_moves = 0;        // 0: one sweep (N moves) per recorded sample
  double initial_step = 1.0;
  std::uint64_t seed = 1;
  double accept_low = 0.2, accept_high = 0.5;  // step tuning window (burn-in)
  long recompute_interval = 100;  // sweeps between full-energy audits
};

struct ChainStats {
  double acceptance = 0.0;   // post burn-in
  double step = 0.0;         // frozen step size
  long samples = 0;
  double max_energy_drift = 0.0;  // incremental vs recomputed, relative
  bool drift_ok = true;          // max drift <= 1e-8
  double final_energy = 0.0;
};

using SampleSink = std::function<void(const std::vector<Vec2>&)>;

// Metropolis chain for exp(-H/T): single-particle Gaussian proposals of width
// `step`, acceptance min(1, exp(-dH/T)). The step is tuned during burn-in to
// keep acceptance inside [accept_low, accept_high], then frozen. Identical
// options give an identical sample stream.
ChainStats run_metropolis(const PlasmaHamiltonian& h, int n_particles,
                          const MetropolisOptions& opts, const SampleSink& sink,
                          const std::vector<Vec2>* init = nullptr);

}  // namespace jellium
