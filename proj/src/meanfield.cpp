#include "jellium/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jellium/poisson.hpp"

namespace jellium {

namespace {

void check_finite(const ScalarField& v, const char* who) {
  for (double x : v.values)
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(who) + ": non-finite potential sample");
}

// Mass when every cell with v <= level is filled to the ceiling.
double filled_mass(const ScalarField& v, double rho_max, double level) {
  long n = 0;
  for (double val : v.values)
    if (val <= level) ++n;
  return rho_max * v.grid.h * v.grid.h * n;
}

double clip(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

double clipped_mass(const ScalarField& z, double rho_max, double shift) {
  double m = 0.0;
  for (double val : z.values) m += clip(val - shift, 0.0, rho_max);
  return m * z.grid.h * z.grid.h;
}

}  // namespace

ScalarField bathtub_solve(const ScalarField& v, double rho_max, double mass) {
  check_finite(v, "bathtub_solve");
  if (rho_max <= 0.0) throw std::invalid_argument("bathtub_solve: rho_max <= 0");
  if (mass < 0.0) throw std::invalid_argument("bathtub_solve: negative mass");
  const double cell = v.grid.h * v.grid.h;
  const double capacity = rho_max * cell * static_cast<double>(v.grid.size());
  if (mass > capacity * (1.0 + 1e-12))
    throw std::invalid_argument("bathtub_solve: mass exceeds rho_max * area");

  ScalarField rho(v.grid);
  if (mass == 0.0) return rho;

  const auto [mn, mx] = std::minmax_element(v.values.begin(), v.values.end());
  double lo = *mn - 1.0;  // filled_mass(lo) = 0 < mass
  double hi = *mx;        // filled_mass(hi) = capacity >= mass
  while (true) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (filled_mass(v, rho_max, mid) >= mass)
      hi = mid;
    else
      lo = mid;
  }

  long below = 0, tie = 0;
  for (double val : v.values) {
    if (val <= lo)
      ++below;
    else if (val <= hi)
      ++tie;
  }
  // filled_mass(hi) >= mass > filled_mass(lo), so the tie group is nonempty.
  const double c = std::min(rho_max, (mass - rho_max * cell * below) / (tie * cell));
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    if (v.values[i] <= lo)
      rho.values[i] = rho_max;
    else if (v.values[i] <= hi)
      rho.values[i] = c;
  }
  return rho;
}

ScalarField project_to_box_mass(const ScalarField& z, double rho_max, double mass) {
  check_finite(z, "project_to_box_mass");
  if (rho_max <= 0.0) throw std::invalid_argument("project_to_box_mass: rho_max <= 0");
  const double cell = z.grid.h * z.grid.h;
  const double capacity = rho_max * cell * static_cast<double>(z.grid.size());
  if (mass < 0.0 || mass > capacity * (1.0 + 1e-12))
    throw std::invalid_argument("project_to_box_mass: infeasible mass");

  const auto [mn, mx] = std::minmax_element(z.values.begin(), z.values.end());
  double lo = *mn - rho_max - 1.0;  // clipped_mass(lo) = capacity >= mass
  double hi = *mx;                  // clipped_mass(hi) = 0 <= mass
  while (true) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (clipped_mass(z, rho_max, mid) >= mass)
      lo = mid;
    else
      hi = mid;
  }
  ScalarField rho(z.grid);
  for (std::size_t i = 0; i < z.values.size(); ++i)
    rho.values[i] = clip(z.values[i] - lo, 0.0, rho_max);
  return rho;
}

void FlockingProblem::validate() const {
  check_finite(v, "flocking");
  if (rho_max <= 0.0) throw std::invalid_argument("flocking: rho_max <= 0");
  if (mass < 0.0) throw std::invalid_argument("flocking: negative mass");
  const double capacity = rho_max * v.grid.h * v.grid.h * static_cast<double>(v.grid.size());
  if (mass > capacity * (1.0 + 1e-12))
    throw std::invalid_argument("flocking: mass exceeds rho_max * area (infeasible)");
  if (lambda != 0.0 && !w)
    throw std::invalid_argument("flocking: lambda != 0 with no interaction kernel");
}

double flocking_energy(const FlockingProblem& problem, const ScalarField& rho) {
  const double cell = rho.grid.h * rho.grid.h;
  double e = 0.0;
  for (std::size_t i = 0; i < rho.values.size(); ++i)
    e += problem.v.values[i] * rho.values[i];
  e *= cell;
  if (problem.lambda != 0.0) {
    const ScalarField u = convolve_kernel(rho, problem.w);
    double pair = 0.0;
    for (std::size_t i = 0; i < rho.values.size(); ++i)
      pair += rho.values[i] * u.values[i];
    e += 0.5 * problem.lambda * pair * cell;
  }
  return e;
}

FlockingResult flocking_solve(const FlockingProblem& problem,
                              const FlockingOptions& opts) {
  problem.validate();
  const GridSpec& g = problem.v.grid;
  const double cell = g.h * g.h;

  FlockingResult res;
  // Uniform start: feasible since mass <= rho_max * area.
  ScalarField rho(g);
  const double uniform = problem.mass / (cell * static_cast<double>(g.size()));
  std::fill(rho.values.begin(), rho.values.end(), uniform);

  auto gradient = [&](const ScalarField& r) {
    ScalarField grad = problem.v;
    if (problem.lambda != 0.0) {
      const ScalarField u = convolve_kernel(r, problem.w);
      for (std::size_t i = 0; i < grad.values.size(); ++i)
        grad.values[i] += problem.lambda * u.values[i];
    }
    return grad;
  };
  auto step_to = [&](const ScalarField& r, const ScalarField& grad, double t) {
    ScalarField z(g);
    for (std::size_t i = 0; i < z.values.size(); ++i)
      z.values[i] = r.values[i] - t * grad.values[i];
    return project_to_box_mass(z, problem.rho_max, problem.mass);
  };
  auto l2_dist = [&](const ScalarField& a, const ScalarField& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      const double d = a.values[i] - b.values[i];
      s += d * d;
    }
    return std::sqrt(s * cell);
  };

  double energy = flocking_energy(problem, rho);
  double t = opts.initial_step;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const ScalarField grad = gradient(rho);
    const ScalarField unit = step_to(rho, grad, 1.0);
    res.kkt_residual = l2_dist(rho, unit);
    if (res.kkt_residual <= opts.tolerance) {
      res.converged = true;
      break;
    }
    bool accepted = false;
    for (int back = 0; back < 60; ++back) {
      const ScalarField cand = step_to(rho, grad, t);
      const double moved = l2_dist(cand, rho);
      if (moved == 0.0) {
        t *= 0.5;
        continue;
      }
      const double cand_energy = flocking_energy(problem, cand);
      if (cand_energy <= energy - 1e-4 * moved * moved / t) {
        rho = cand;
        energy = cand_energy;
        t = std::min(t * 1.25, 1e9);
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // step collapsed: report the residual we have
  }
  res.iterations = it;
  res.energy = energy;

  // Support and saturation statistics; the interface band (cells within
  // opts.interface_band_cells of a vacant cell in Chebyshev distance) is
  // excluded from the saturation count.
  const double occupied = 1e-9 * problem.rho_max;
  std::vector<char> support(g.size(), 0);
  long nsup = 0;
  for (std::size_t i = 0; i < rho.values.size(); ++i)
    if (rho.values[i] > occupied) {
      support[i] = 1;
      ++nsup;
    }
  res.support_area = nsup * cell;
  const int band = opts.interface_band_cells;
  long interior = 0, saturated = 0;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (!support[g.index(ix, iy)]) continue;
      bool deep = true;
      for (int dy = -band; dy <= band && deep; ++dy) {
        for (int dx = -band; dx <= band; ++dx) {
          const int jx = ix + dx, jy = iy + dy;
          if (jx < 0 || jy < 0 || jx >= g.nx || jy >= g.ny ||
              !support[g.index(jx, jy)]) {
            deep = false;
            break;
          }
        }
      }
      if (!deep) continue;
      ++interior;
      if (rho.values[g.index(ix, iy)] >= 0.99 * problem.rho_max) ++saturated;
    }
  }
  res.saturated_fraction = interior > 0 ? static_cast<double>(saturated) / interior : 0.0;
  res.density = std::move(rho);
  return res;
}

EquilibriumResult meanfield_equilibrium(const ScalarField& v, double mass,
                                        const EquilibriumOptions& opts) {
  check_finite(v, "meanfield_equilibrium");
  if (mass <= 0.0) throw std::invalid_argument("meanfield_equilibrium: mass <= 0");
  const GridSpec& g = v.grid;
  if (g.nx < 8 || g.ny < 8)
    throw std::invalid_argument("meanfield_equilibrium: grid too small");
  const double cell = g.h * g.h;

  // Confinement: the minimum must sit strictly inside, below the whole border.
  std::size_t imin = 0;
  for (std::size_t i = 1; i < v.values.size(); ++i)
    if (v.values[i] < v.values[imin]) imin = i;
  const int cx = static_cast<int>(imin) % g.nx, cy = static_cast<int>(imin) / g.nx;
  double border_min = std::numeric_limits<double>::infinity();
  for (int ix = 0; ix < g.nx; ++ix)
    border_min = std::min({border_min, v.at(ix, 0), v.at(ix, g.ny - 1)});
  for (int iy = 0; iy < g.ny; ++iy)
    border_min = std::min({border_min, v.at(0, iy), v.at(g.nx - 1, iy)});
  if (!(border_min > v.values[imin]) || cx == 0 || cy == 0 || cx == g.nx - 1 ||
      cy == g.ny - 1)
    throw std::invalid_argument("meanfield_equilibrium: v is not confining on the grid");
  const Vec2 c0 = g.center(cx, cy);

  // f = A v on interior cells, A = -Lap_h.
  std::vector<double> f(g.size(), 0.0);
  for (int iy = 1; iy < g.ny - 1; ++iy)
    for (int ix = 1; ix < g.nx - 1; ++ix)
      f[g.index(ix, iy)] = (4.0 * v.at(ix, iy) - v.at(ix - 1, iy) - v.at(ix + 1, iy) -
                            v.at(ix, iy - 1) - v.at(ix, iy + 1)) /
                           cell;

  ScalarField psi(g);  // warm-started across the mu bisection
  std::vector<double> dirichlet(g.size(), 0.0);
  std::vector<double> q;

  auto mass_at = [&](double mu) {
    for (int ix = 0; ix < g.nx; ++ix) {
      for (int iy : {0, g.ny - 1}) {
        const Vec2 p = g.center(ix, iy);
        dirichlet[g.index(ix, iy)] = v.at(ix, iy) - mass * std::log(dist(p, c0)) - mu;
      }
    }
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int ix : {0, g.nx - 1}) {
        const Vec2 p = g.center(ix, iy);
        dirichlet[g.index(ix, iy)] = v.at(ix, iy) - mass * std::log(dist(p, c0)) - mu;
      }
    }
    const LcpResult r = psor_solve(psi, f, dirichlet, opts.lcp);
    if (!r.converged)
      throw std::runtime_error("meanfield_equilibrium: complementarity solve stalled");
    q = lcp_residual_field(psi, f);
    double m = 0.0;
    for (double x : q) m += std::max(0.0, x);
    return m * cell / (2.0 * M_PI);
  };

  double mu_lo = v.values[imin];  // empty solution, mass 0
  double mu_hi = v.values[imin] + 1.0;
  int steps = 0;
  while (mass_at(mu_hi) < mass) {
    mu_hi = v.values[imin] + 2.0 * (mu_hi - v.values[imin]);
    if (++steps > 60)
      throw std::runtime_error("meanfield_equilibrium: could not bracket the mass");
  }

  EquilibriumResult res;
  double m = 0.0;
  for (int it = 0; it < opts.max_bisections; ++it) {
    const double mu = 0.5 * (mu_lo + mu_hi);
    m = mass_at(mu);
    res.mu = mu;
    ++res.bisections;
    if (std::fabs(m - mass) <= opts.mass_tol * mass) {
      res.converged = true;
      break;
    }
    if (m < mass)
      mu_lo = mu;
    else
      mu_hi = mu;
    if (mu_hi - mu_lo <= 1e-15 * (1.0 + std::fabs(mu_hi))) {
      res.converged = true;
      break;
    }
  }
  res.mass_error = std::fabs(m - mass) / mass;

  // Exterior cells keep residual dust up to lcp.tol after the SOR stops; a
  // value at or below that bound carries no mass information, so drop it and
  // the support stays compact.
  const double dust = opts.lcp.tol / (2.0 * M_PI);
  ScalarField rho(g);
  for (std::size_t i = 0; i < rho.values.size(); ++i) {
    const double val = std::max(0.0, q[i]) / (2.0 * M_PI);
    rho.values[i] = val > dust ? val : 0.0;
  }

  // The support must stay clear of the border ring, else the far-field
  // boundary condition is meaningless.
  const int margin = opts.boundary_margin_cells;
  const double tiny = 1e-10 * mass / (cell * static_cast<double>(g.size()));
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      if ((ix < margin || iy < margin || ix >= g.nx - margin || iy >= g.ny - margin) &&
          rho.at(ix, iy) > tiny)
        throw std::runtime_error(
            "meanfield_equilibrium: support reached the grid margin (enlarge the grid)");

  double kept = 0.0;
  for (double x : rho.values) kept += x;
  kept *= cell;
  if (kept > 0.0) {
    const double scale = mass / kept;
    for (double& x : rho.values) x *= scale;  // exact total mass
  }
  res.density = std::move(rho);
  return res;
}

}  // namespace jellium
