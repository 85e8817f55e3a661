#include "jellium/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jellium/rng.hpp"

namespace jellium {

DensityEstimate::DensityEstimate(const GridSpec& grid, int order,
                                 long expected_samples, int batches)
    : grid_(grid), order_(order), batches_(batches),
      expected_samples_(expected_samples) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("DensityEstimate: order must be 1 or 2");
  if (batches < 2) throw std::invalid_argument("DensityEstimate: batches < 2");
  if (expected_samples < batches)
    throw std::invalid_argument("DensityEstimate: fewer samples than batches");
  per_batch_ = (expected_samples + batches - 1) / batches;
  const std::size_t ncells = grid.size();
  const std::size_t bins = order == 1 ? ncells : ncells * ncells;
  if (order == 2 && ncells > 4096)
    throw std::invalid_argument("DensityEstimate: order-2 grid too fine");
  counts_.assign(batches, std::vector<double>(bins, 0.0));
  batch_samples_.assign(batches, 0);
}

void DensityEstimate::add_sample(const std::vector<Vec2>& pts) {
  const int b = static_cast<int>(std::min<long>(samples_ / per_batch_, batches_ - 1));
  ++samples_;
  ++batch_samples_[b];
  std::vector<double>& c = counts_[b];
  const std::size_t ncells = grid_.size();

  std::vector<std::size_t> cells;
  cells.reserve(pts.size());
  std::vector<bool> inside(pts.size(), false);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    int ix, iy;
    if (grid_.locate(pts[i], ix, iy)) {
      cells.push_back(grid_.index(ix, iy));
      inside[i] = true;
    } else {
      cells.push_back(0);
    }
  }
  if (order_ == 1) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (inside[i]) c[cells[i]] += 1.0;
    return;
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!inside[i]) continue;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == i || !inside[j]) continue;
      c[cells[i] * ncells + cells[j]] += 1.0;
    }
  }
}

std::vector<double> DensityEstimate::flat_density() const {
  if (samples_ == 0) throw std::runtime_error("DensityEstimate: no samples");
  const double cell = grid_.h * grid_.h;
  const double norm = 1.0 / (samples_ * (order_ == 1 ? cell : cell * cell));
  std::vector<double> out(counts_[0].size(), 0.0);
  for (const auto& c : counts_)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i];
  for (double& v : out) v *= norm;
  return out;
}

ScalarField DensityEstimate::density() const {
  if (order_ != 1) throw std::runtime_error("density(): order-1 only");
  ScalarField f(grid_);
  f.values = flat_density();
  return f;
}

ScalarField DensityEstimate::standard_error() const {
  if (order_ != 1) throw std::runtime_error("standard_error(): order-1 only");
  ScalarField se(grid_);
  const double cell = grid_.h * grid_.h;
  int used = 0;
  for (int b = 0; b < batches_; ++b)
    if (batch_samples_[b] > 0) ++used;
  if (used < 2) throw std::runtime_error("standard_error(): need >= 2 batches");
  for (std::size_t i = 0; i < se.values.size(); ++i) {
    double mean = 0.0;
    for (int b = 0; b < batches_; ++b)
      if (batch_samples_[b] > 0) mean += counts_[b][i] / (batch_samples_[b] * cell);
    mean /= used;
    double var = 0.0;
    for (int b = 0; b < batches_; ++b) {
      if (batch_samples_[b] == 0) continue;
      const double d = counts_[b][i] / (batch_samples_[b] * cell) - mean;
      var += d * d;
    }
    se.values[i] = std::sqrt(var / (used * (used - 1)));
  }
  return se;
}

double DensityEstimate::integral() const {
  if (samples_ == 0) throw std::runtime_error("DensityEstimate: no samples");
  double s = 0.0;
  for (const auto& c : counts_)
    for (double v : c) s += v;
  // Normalization cancels the cell volume: counts / samples.
  return s / samples_;
}

WilsonInterval wilson_interval(long successes, long trials) {
  WilsonInterval w;
  w.trials = trials;
  if (trials == 0) return w;
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2n = z * z / n;
  const double denom = 1.0 + z2n;
  const double center = (p + 0.5 * z2n) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + 0.25 * z2n / n) / denom;
  w.p_hat = p;
  w.low = std::max(0.0, center - half);
  w.high = std::min(1.0, center + half);
  return w;
}

OvercountProbe::OvercountProbe(Vec2 center, double radius, double eps,
                               double expected_density)
    : center_(center), radius_(radius) {
  if (radius <= 0.0 || eps < 0.0 || expected_density <= 0.0)
    throw std::invalid_argument("OvercountProbe: bad parameters");
  threshold_ = (1.0 + eps) * expected_density * M_PI * radius * radius;
}

void OvercountProbe::add_sample(const std::vector<Vec2>& pts) {
  int count = 0;
  for (const Vec2& p : pts)
    if (dist(p, center_) <= radius_) ++count;
  ++trials_;
  if (count > threshold_) ++over_;
}

FactorizationGap factorization_gap(const DensityEstimate& est2, int n_particles,
                                   int n_bootstrap, std::uint64_t seed) {
  if (est2.order() != 2)
    throw std::invalid_argument("factorization_gap: needs an order-2 estimate");
  if (n_particles < 2)
    throw std::invalid_argument("factorization_gap: N < 2");

  const GridSpec& g = est2.grid();
  const std::size_t ncells = g.size();
  const double cell = g.h * g.h;
  const double nn1 = static_cast<double>(n_particles) * (n_particles - 1);
  const auto& batches = est2.batch_counts();
  const auto& bs = est2.batch_samples();

  auto gap_of = [&](const std::vector<double>& weight) {
    // weight[b]: multiplicity of batch b in the resample.
    double samples = 0.0;
    for (std::size_t b = 0; b < batches.size(); ++b) samples += weight[b] * bs[b];
    if (samples <= 0.0) return 0.0;
    std::vector<double> rho2(ncells * ncells, 0.0);
    for (std::size_t b = 0; b < batches.size(); ++b) {
      if (weight[b] == 0.0 || bs[b] == 0) continue;
      const auto& c = batches[b];
      for (std::size_t i = 0; i < rho2.size(); ++i) rho2[i] += weight[b] * c[i];
    }
    const double norm2d = 1.0 / (samples * cell * cell);
    // Marginal: int rho2(x,y) dy = (N-1) rho(x).
    std::vector<double> rho(ncells, 0.0);
    for (std::size_t i = 0; i < ncells; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < ncells; ++j) s += rho2[i * ncells + j];
      rho[i] = s * norm2d * cell / (n_particles - 1);
    }
    double l1 = 0.0;
    const double fac = 1.0 - 1.0 / n_particles;
    for (std::size_t i = 0; i < ncells; ++i)
      for (std::size_t j = 0; j < ncells; ++j)
        l1 += std::fabs(rho2[i * ncells + j] * norm2d - fac * rho[i] * rho[j]) *
              cell * cell;
    return l1 / nn1;
  };

  FactorizationGap out;
  out.n_particles = n_particles;
  std::vector<double> ones(batches.size(), 1.0);
  out.gap = gap_of(ones);

  Rng rng(seed);
  std::vector<double> reps;
  reps.reserve(n_bootstrap);
  std::vector<double> w(batches.size());
  for (int r = 0; r < n_bootstrap; ++r) {
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t b = 0; b < batches.size(); ++b)
      w[rng.below(batches.size())] += 1.0;
    reps.push_back(gap_of(w));
  }
  double mean = 0.0;
  for (double v : reps) mean += v;
  mean /= reps.size();
  double var = 0.0;
  for (double v : reps) var += (v - mean) * (v - mean);
  out.bootstrap_se = std::sqrt(var / (reps.size() - 1));
  return out;
}

}  // namespace jellium
