#include "jellium/renorm.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "jellium/kernel.hpp"
#include "jellium/poisson.hpp"

namespace jellium {

RenormConstants RenormConstants::for_profile(const SmearingProfile& profile) {
  RenormConstants k;
  std::vector<double> xs, ws;
  gauss_legendre(64, 0.0, 1.0, xs, ws);
  double self = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    self += ws[i] * profile.radial(xs[i]) * profile.potential(xs[i]) * xs[i];
  // gamma2 = c2 * iint sigma(x) (-log|x-y|) sigma(y) = c2 * int sigma * Phi_sigma.
  k.gamma2 = k.c2 * (2.0 * M_PI * self);
  return k;
}

static double periodic_min_pair(const std::vector<Vec2>& pts, double L) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double dx = std::fabs(pts[i].x - pts[j].x);
      double dy = std::fabs(pts[i].y - pts[j].y);
      dx = std::min(dx, L - dx);
      dy = std::min(dy, L - dy);
      best = std::min(best, std::hypot(dx, dy));
    }
  }
  return best;
}

RenormEstimate renormalized_energy_estimate(const std::vector<Vec2>& points,
                                            const std::vector<int>& multiplicities,
                                            double rho, double eta, double R,
                                            const RenormOptions& opts) {
  if (eta <= 0.0 || R <= 0.0)
    throw std::domain_error("renormalized_energy_estimate: eta and R must be positive");
  if (rho < 0.0) throw std::domain_error("renormalized_energy_estimate: rho < 0");
  if (2.0 * eta >= R)
    throw std::domain_error("renormalized_energy_estimate: smearing wider than the box");
  if (points.size() != multiplicities.size())
    throw std::invalid_argument("renormalized_energy_estimate: size mismatch");
  for (const Vec2& p : points)
    if (std::fabs(p.x) > 0.5 * R || std::fabs(p.y) > 0.5 * R)
      throw std::domain_error("renormalized_energy_estimate: point outside the box");

  int n = static_cast<int>(std::lround(R * opts.cells_per_eta / eta));
  n = std::clamp(n, opts.min_cells, opts.max_cells);
  if (n % 2) ++n;

  RenormEstimate est;
  est.grid_cells = n;
  est.min_pair_distance = periodic_min_pair(points, R);
  est.eta_overlap_warning = est.min_pair_distance < 2.0 * eta;

  GridSpec g;
  g.h = R / n;
  g.nx = g.ny = n;
  g.origin = {-0.5 * R, -0.5 * R};

  ScalarField rhs(g);
  mollify_points(rhs, points, multiplicities, eta, opts.profile, /*periodic=*/true);
  for (double& v : rhs.values) v = 2.0 * M_PI * (v - rho);

  const ScalarField phi = solve_periodic_poisson(rhs);
  ScalarField ex, ey;
  gradient_periodic(phi, ex, ey);
  double ms = 0.0;
  for (std::size_t i = 0; i < ex.values.size(); ++i)
    ms += ex.values[i] * ex.values[i] + ey.values[i] * ey.values[i];
  ms /= ex.values.size();

  const RenormConstants k = RenormConstants::for_profile(opts.profile);
  est.field_mean_square = ms;
  est.counterterm = rho * (k.kappa2 * (-std::log(eta)) + k.gamma2);
  est.value = ms - est.counterterm;
  return est;
}

}  // namespace jellium
