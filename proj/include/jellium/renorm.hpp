#pragma once
#include <cmath>
#include <vector>

#include "jellium/smearing.hpp"

namespace jellium {

// Counterterm constants for the smeared jellium energy. kappa2 multiplies
// -log(eta); gamma2 is the profile self-interaction 2*pi*iint s C s.
struct RenormConstants {
  double c2 = 2.0 * M_PI;
  double kappa2 = 2.0 * M_PI;
  double gamma2 = 0.0;

  static RenormConstants for_profile(const SmearingProfile& profile);
};

struct RenormOptions {
  double cells_per_eta = 8.0;  // grid resolution relative to eta
  int min_cells = 64;
  int max_cells = 4096;
  SmearingProfile profile = SmearingProfile::tent();
};

struct RenormEstimate {
  double value = 0.0;             // mean |E_eta|^2 minus the counterterm
  double field_mean_square = 0.0;
  double counterterm = 0.0;
  double min_pair_distance = 0.0;  // periodic metric; +inf for < 2 points
  bool eta_overlap_warning = false;
  int grid_cells = 0;
};

// Smeared-field jellium energy of a point configuration in the periodic
// square box of side R centered at the origin, background density rho:
// solve -Lap h = 2*pi*(sum_p N_p delta_p^eta - rho) (zero-mean closure),
// then  mean_{box} |grad h|^2 - rho*(kappa2*(-log eta) + gamma2).
RenormEstimate renormalized_energy_estimate(const std::vector<Vec2>& points,
                                            const std::vector<int>& multiplicities,
                                            double rho, double eta, double R,
                                            const RenormOptions& opts = {});

}  // namespace jellium
