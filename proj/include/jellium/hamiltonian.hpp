#pragma once
#include <functional>

#include "jellium/config.hpp"

namespace jellium {

// Total energy of the mobile charges. Coincident pairs and charges sitting on
// a hole center (closer than kCoincidenceThreshold) give +infinity, the
// deliberate infinite-energy signal.
double plasma_energy(const PlasmaHamiltonian& h, const std::vector<Vec2>& pts);
double plasma_energy(const PlasmaHamiltonian& h, const PointConfiguration& c);

// Gradient wrt every coordinate; matches central finite differences away
// from coincidences.
std::vector<Vec2> plasma_gradient(const PlasmaHamiltonian& h,
                                  const std::vector<Vec2>& pts);

// Energy change when point `idx` moves to `to`, in O(N); equals
// E(moved) - E(current).
double plasma_energy_delta(const PlasmaHamiltonian& h, const std::vector<Vec2>& pts,
                           std::size_t idx, Vec2 to);

// Rescaled system with unit pair coupling and unit background density:
// original H(scale*x) / (2*ell) = reduced H(x) + constant(N).
struct LaughlinMap {
  PlasmaHamiltonian original;  // beta = B/2, g = 2*ell, holes as given
  PlasmaHamiltonian reduced;   // beta = pi/2, g = 1, scaled holes
  double scale = 1.0;          // sqrt(2*pi*ell/B)
};
LaughlinMap laughlin_to_plasma(double B, double ell,
                               const std::vector<QuasiHole>& holes = {});

struct DiskSpec {
  Vec2 center;
  double radius = 0.0;
};

struct SuperharmonicityReport {
  bool passed = true;
  double worst_margin = 0.0;        // min over disks of value(center) - circle mean
  std::vector<std::size_t> skipped;  // disks containing a singularity
};

// Mean-value test: a superharmonic function dominates its circle averages.
// Each disk contributes margin = W(center) - mean over `nodes` points of the
// boundary circle; the report fails when some margin < -tol.
SuperharmonicityReport superharmonicity_check(
    const std::function<double(Vec2)>& potential,
    const std::vector<Vec2>& singularities, const std::vector<DiskSpec>& disks,
    int nodes = 64, double tol = 1e-8);

// One-body potential of the holes, sum_k -c_k log|x - a_k|, with its
// singularity list; input for superharmonicity_check.
std::function<double(Vec2)> hole_potential(const std::vector<QuasiHole>& holes);
std::vector<Vec2> hole_singularities(const std::vector<QuasiHole>& holes);

}  // namespace jellium
