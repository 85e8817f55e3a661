#pragma once
#include "jellium/config.hpp"
#include "jellium/grid.hpp"
#include "jellium/lcp.hpp"

namespace jellium {

struct BalayageOptions {
  double h = 0.02;
  double mollify_radius_cells = 2.0;  // point charges smeared over 2h
  double box_padding = 0.5;
  int max_enlargements = 3;
  int max_cells_per_axis = 3000;
  LcpOptions lcp;
};

// Screening region of a finite positive charge against background density 1:
// phi = -log * (sum N_i delta_{x_i} - 1_Sigma) solved as the obstacle problem
//   phi >= 0,  q := -Lap phi - 2 pi (mu - 1) >= 0,  complementarity.
// sigma is the cell coverage 1 - q/(2 pi), clamped to [0,1]: exactly 1 on
// saturated cells, 0 deep outside, fractional on first-contact cells, where
// it equals the share of background the sweep deposited there. Counting a
// positivity set instead would lose that fractional rim and bias the area
// low by about half a cell of perimeter.
struct BalayageSolution {
  ScalarField phi;
  ScalarField sigma;            // coverage in [0,1]
  double area = 0.0;            // h^2 * sum sigma; equals total multiplicity
                                // up to solver residual and box truncation
  double support_radius = 0.0;  // max |cell center| over covered cells
  double residual = 0.0;
  int sweeps = 0;
  int enlargements = 0;
  bool converged = false;
  std::vector<Vec2> points;     // generating charges
  std::vector<int> multiplicities;

  // Region membership: majority-covered cells.
  bool sigma_at(int ix, int iy) const {
    return sigma.values[phi.grid.index(ix, iy)] > 0.5;
  }
};

BalayageSolution partial_balayage(const std::vector<Vec2>& points,
                                  const std::vector<int>& multiplicities,
                                  const BalayageOptions& opts = {});
BalayageSolution partial_balayage(const PointConfiguration& c,
                                  const BalayageOptions& opts = {});

// Incompressible Thomas-Fermi energy of a [0,1]-valued density against the
// solution's charges: int sum_i N_i log|x-x_i| sigma - 1/2 iint sigma log sigma.
// Self-interaction by grid convolution with the cell-averaged kernel.
double tf_energy(const BalayageSolution& sol);
double tf_energy_of_density(const ScalarField& sigma, const std::vector<Vec2>& points,
                            const std::vector<int>& multiplicities);

struct SupportBoundReport {
  double R = 0.0;
  double sup_phi = 0.0;   // sup |phi| on the circle |x| = R
  double M_R = 0.0;       // sup_phi / pi
  double bound = 0.0;     // R + sqrt(M_R)
  double measured = 0.0;  // solution support radius
  bool satisfied = false; // measured <= bound + h
};

// Checks the a-priori support bound on the circle |x|=R (>= `nodes` samples,
// bilinear interpolation). The circle must lie inside the grid.
SupportBoundReport support_bound(const BalayageSolution& sol, double R,
                                 int nodes = 256);

struct ExclusionReport {
  // Non-subset points strictly inside the subset's screening region (deeper
  // than the one-cell boundary band).
  std::vector<std::size_t> violations;
  double area = 0.0;  // of the subset's region
};

ExclusionReport exclusion_check(const PointConfiguration& c,
                                const std::vector<std::size_t>& subset,
                                const BalayageOptions& opts = {});

struct DiskCoverReport {
  std::vector<Vec2> centers;
  std::vector<double> radii;
  double uncovered_fraction = 0.0;  // sigma cells not covered by any disk
};

// Greedy cover of the region by maximal inscribed disks whose centers are
// sigma cells within max|x_i| + h of the origin. Diagnostic only.
DiskCoverReport union_of_disks_diagnostic(const BalayageSolution& sol,
                                          int max_disks = 64);

// Region boundary as marching-squares polylines on the indicator.
std::vector<std::vector<Vec2>> region_boundary(const BalayageSolution& sol);

// max |phi| over cells outside the Chebyshev dilation of the region, divided
// by max phi over the grid. Near zero when the region screens its charges.
double exterior_max_ratio(const BalayageSolution& sol, int dilation_cells = 2);

}  // namespace jellium
