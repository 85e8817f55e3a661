#pragma once
#include <cstdint>
#include <vector>

#include "jellium/grid.hpp"

namespace jellium {

// Streaming histogram estimate of the k-point correlation density (k = 1 or 2)
// with contiguous batches for error bars. Normalization: the k=1 estimate
// integrates to N (particles inside the grid), the k=2 estimate to N(N-1),
// matching ordered-tuple counting.
class DensityEstimate {
 public:
  // expected_samples fixes the batch boundaries; extra samples spill into the
  // last batch. For order 2 keep the grid coarse: storage is (nx*ny)^2.
  DensityEstimate(const GridSpec& grid, int order, long expected_samples,
                  int batches = 20);

  void add_sample(const std::vector<Vec2>& pts);

  long samples() const { return samples_; }
  int order() const { return order_; }
  int batches() const { return batches_; }
  const GridSpec& grid() const { return grid_; }

  // Order 1: density field and per-bin batch-means standard error.
  ScalarField density() const;
  ScalarField standard_error() const;

  // Flattened estimates (order 2: index (cell_i * ncells + cell_j)).
  std::vector<double> flat_density() const;
  double integral() const;  // sum * h^(2k)

  // Batch data for resampling consumers.
  const std::vector<std::vector<double>>& batch_counts() const { return counts_; }
  const std::vector<long>& batch_samples() const { return batch_samples_; }

 private:
  GridSpec grid_;
  int order_;
  int batches_;
  long expected_samples_;
  long per_batch_;
  long samples_ = 0;
  std::vector<std::vector<double>> counts_;  // [batch][bin]
  std::vector<long> batch_samples_;
};

struct WilsonInterval {
  double p_hat = 0.0;
  double low = 0.0;
  double high = 0.0;
  long trials = 0;
};

// 95% Wilson score interval for a Bernoulli frequency.
WilsonInterval wilson_interval(long successes, long trials);

// Streaming probe for P(count in D(center,R) > (1+eps) * expected_density * |D|).
class OvercountProbe {
 public:
  OvercountProbe(Vec2 center, double radius, double eps, double expected_density);
  void add_sample(const std::vector<Vec2>& pts);
  WilsonInterval result() const { return wilson_interval(over_, trials_); }
  double threshold() const { return threshold_; }

 private:
  Vec2 center_;
  double radius_;
  double threshold_;
  long over_ = 0;
  long trials_ = 0;
};

struct FactorizationGap {
  double gap = 0.0;           // normalized L1 in [0, 2]
  double bootstrap_se = 0.0;
  int n_particles = 0;
};

// L1 distance between the 2-point estimate and (1 - 1/N) rho x rho, divided
// by N(N-1); bootstrap over batches for the error bar.
FactorizationGap factorization_gap(const DensityEstimate& est2, int n_particles,
                                   int n_bootstrap = 200, std::uint64_t seed = 7);

}  // namespace jellium
