#include "jellium/balayage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "jellium/kernel.hpp"
#include "jellium/poisson.hpp"
#include "jellium/smearing.hpp"

namespace jellium {

LcpResult psor_solve(ScalarField& phi, const std::vector<double>& f,
                     const std::vector<double>& dirichlet, const LcpOptions& opts) {
  const GridSpec& g = phi.grid;
  if (g.nx < 3 || g.ny < 3) throw std::invalid_argument("psor_solve: grid too small");
  if (f.size() != g.size()) throw std::invalid_argument("psor_solve: rhs size");
  if (!dirichlet.empty() && dirichlet.size() != g.size())
    throw std::invalid_argument("psor_solve: dirichlet size");

  // Pin the border ring.
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (ix == 0 || iy == 0 || ix == g.nx - 1 || iy == g.ny - 1)
        phi.at(ix, iy) = dirichlet.empty() ? 0.0 : dirichlet[g.index(ix, iy)];
    }
  }

  const double h2 = g.h * g.h;
  const double diag = 4.0 / h2;
  const double off = 1.0 / h2;
  LcpResult res;
  double* const p = phi.values.data();
  const int nx = g.nx;

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    for (int color = 0; color < 2; ++color) {
      for (int iy = 1; iy < g.ny - 1; ++iy) {
        const std::size_t row = static_cast<std::size_t>(iy) * nx;
        int ix = 1 + ((iy + 1 + color) & 1);
        for (; ix < nx - 1; ix += 2) {
          const std::size_t i = row + ix;
          const double nb = p[i - 1] + p[i + 1] + p[i - nx] + p[i + nx];
          const double gs = (f[i] + off * nb) / diag;
          const double v = p[i] + opts.omega * (gs - p[i]);
          p[i] = v > 0.0 ? v : 0.0;
        }
      }
    }
    res.sweeps = sweep + 1;
    if ((sweep + 1) % opts.check_interval == 0 || sweep + 1 == opts.max_sweeps) {
      double r = 0.0;
      for (int iy = 1; iy < g.ny - 1; ++iy) {
        const std::size_t row = static_cast<std::size_t>(iy) * nx;
        for (int ix = 1; ix < nx - 1; ++ix) {
          const std::size_t i = row + ix;
          const double nb = p[i - 1] + p[i + 1] + p[i - nx] + p[i + nx];
          const double q = diag * p[i] - off * nb - f[i];
          const double m = std::min(diag * p[i], q);
          r = std::max(r, std::fabs(m));
        }
      }
      res.residual = r;
      if (r < opts.tol) {
        res.converged = true;
        return res;
      }
    }
  }
  return res;
}

std::vector<double> lcp_residual_field(const ScalarField& phi,
                                       const std::vector<double>& f) {
  const GridSpec& g = phi.grid;
  std::vector<double> q(g.size(), 0.0);
  const double h2 = g.h * g.h;
  for (int iy = 1; iy < g.ny - 1; ++iy) {
    for (int ix = 1; ix < g.nx - 1; ++ix) {
      const std::size_t i = g.index(ix, iy);
      const double nb = phi.values[i - 1] + phi.values[i + 1] +
                        phi.values[i - g.nx] + phi.values[i + g.nx];
      q[i] = (4.0 * phi.values[i] - nb) / h2 - f[i];
    }
  }
  return q;
}

namespace {

// Exact obstacle solution for a single charge of mass m at the origin,
// clamped below at 0; superposed as a warm start.
double single_charge_phi(double m, double s) {
  const double r = std::sqrt(m / M_PI);
  if (s >= r) return 0.0;
  const double ss = std::max(s, 1e-6);
  return m * (-std::log(ss)) -
         (m * (-std::log(r)) + 0.5 * M_PI * (r * r - ss * ss));
}

double estimate_half_side(const std::vector<Vec2>& pts,
                          const std::vector<int>& mults, double padding) {
  double r_pts = 0.0;
  double K = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    r_pts = std::max(r_pts, norm(pts[i]));
    K += mults[i];
  }
  // Support radius from the unbalanced point potential on a probe circle.
  const double probe = r_pts + 1.0;
  double sup = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double th = 2.0 * M_PI * k / 64;
    const Vec2 x{probe * std::cos(th), probe * std::sin(th)};
    double v = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      v += mults[i] * (-std::log(std::max(dist(x, pts[i]), 1e-9)));
    sup = std::max(sup, std::fabs(v));
  }
  const double by_probe = probe + std::sqrt(sup / M_PI);
  const double by_mass = r_pts + 1.5 * std::sqrt(K / M_PI);
  return std::max(by_probe, by_mass) + padding;
}

}  // namespace

BalayageSolution partial_balayage(const std::vector<Vec2>& points,
                                  const std::vector<int>& multiplicities,
                                  const BalayageOptions& opts) {
  if (points.empty()) throw std::invalid_argument("partial_balayage: no charges");
  if (points.size() != multiplicities.size())
    throw std::invalid_argument("partial_balayage: size mismatch");
  for (int m : multiplicities)
    if (m < 1) throw std::invalid_argument("partial_balayage: multiplicity < 1");

  double r_pts = 0.0;
  for (const Vec2& p : points) r_pts = std::max(r_pts, norm(p));

  double half = estimate_half_side(points, multiplicities, opts.box_padding);
  BalayageSolution sol;

  for (int attempt = 0; attempt <= opts.max_enlargements; ++attempt) {
    const int n = static_cast<int>(std::ceil(2.0 * half / opts.h));
    if (n > opts.max_cells_per_axis)
      throw std::runtime_error("partial_balayage: box exceeds the grid budget");
    GridSpec g;
    g.h = opts.h;
    g.nx = g.ny = n;
    g.origin = {-0.5 * n * opts.h, -0.5 * n * opts.h};

    ScalarField mu(g);
    mollify_points(mu, points, multiplicities, opts.mollify_radius_cells * opts.h,
                   SmearingProfile::tent(), /*periodic=*/false);

    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < f.size(); ++i)
      f[i] = 2.0 * M_PI * (mu.values[i] - 1.0);

    ScalarField phi(g);
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int ix = 0; ix < g.nx; ++ix) {
        const Vec2 c = g.center(ix, iy);
        double v = 0.0;
        for (std::size_t k = 0; k < points.size(); ++k)
          v += single_charge_phi(multiplicities[k], dist(c, points[k]));
        phi.at(ix, iy) = v;
      }
    }

    const LcpResult lr = psor_solve(phi, f, {}, opts.lcp);

    sol = BalayageSolution{};
    sol.phi = std::move(phi);
    sol.points = points;
    sol.multiplicities = multiplicities;
    sol.residual = lr.residual;
    sol.sweeps = lr.sweeps;
    sol.enlargements = attempt;
    sol.converged = lr.converged;

    // Coverage from the complementarity residual. The clamp matters: without
    // it the area telescopes to the exact total mass even for a broken solve,
    // so any q outside [0, 2 pi] must cost area rather than cancel.
    const std::vector<double> q = lcp_residual_field(sol.phi, f);
    sol.sigma = ScalarField(g);
    double covered = 0.0;
    double max_r = 0.0;
    bool touches_edge = false;
    for (int iy = 1; iy < g.ny - 1; ++iy) {
      for (int ix = 1; ix < g.nx - 1; ++ix) {
        const std::size_t i = g.index(ix, iy);
        const double cov = std::clamp(1.0 - q[i] / (2.0 * M_PI), 0.0, 1.0);
        sol.sigma.values[i] = cov;
        covered += cov;
        if (cov > 0.5) {
          max_r = std::max(max_r, norm(g.center(ix, iy)));
          if (ix <= 1 || iy <= 1 || ix >= g.nx - 2 || iy >= g.ny - 2)
            touches_edge = true;
        }
      }
    }
    sol.area = covered * opts.h * opts.h;
    sol.support_radius = max_r;

    // A-priori containment: the box must hold D(0, R + sqrt(M_R)) for a probe
    // circle R > max|x_i| read off the solved potential.
    bool box_ok = !touches_edge;
    if (box_ok) {
      const double probe = std::min(r_pts + 1.0, 0.9 * half);
      if (probe > r_pts) {
        double sup = 0.0;
        for (int k = 0; k < 256; ++k) {
          const double th = 2.0 * M_PI * k / 256;
          sup = std::max(sup, std::fabs(sol.phi.sample(
                                  {probe * std::cos(th), probe * std::sin(th)})));
        }
        if (probe + std::sqrt(sup / M_PI) > half) box_ok = false;
      } else {
        box_ok = false;
      }
    }
    if (box_ok) return sol;
    half *= 1.5;
  }
  throw std::runtime_error(
      "partial_balayage: support bound not contained after max enlargements");
}

BalayageSolution partial_balayage(const PointConfiguration& c,
                                  const BalayageOptions& opts) {
  c.validate();
  return partial_balayage(c.points, c.multiplicities, opts);
}

double tf_energy_of_density(const ScalarField& sigma, const std::vector<Vec2>& points,
                            const std::vector<int>& multiplicities) {
  for (double v : sigma.values)
    if (v < -1e-12 || v > 1.0 + 1e-12)
      throw std::domain_error("tf_energy: density outside [0,1]");
  const ScalarField u = log_potential_of_density(sigma);  // -log potential
  double cross = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    cross += multiplicities[i] * u.sample(points[i]);
  double self = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i)
    self += sigma.values[i] * u.values[i];
  self *= sigma.grid.h * sigma.grid.h;
  // E = int sum_i log|x-x_i| sigma - 1/2 iint sigma log sigma
  //   = -sum_i U(x_i) + 1/2 int sigma U.
  return -cross + 0.5 * self;
}

double tf_energy(const BalayageSolution& sol) {
  return tf_energy_of_density(sol.sigma, sol.points, sol.multiplicities);
}

SupportBoundReport support_bound(const BalayageSolution& sol, double R, int nodes) {
  SupportBoundReport rep;
  rep.R = R;
  const GridSpec& g = sol.phi.grid;
  const double half_x = std::min(-g.origin.x, g.origin.x + g.nx * g.h);
  if (R <= 0.0 || R >= half_x - g.h)
    throw std::domain_error("support_bound: circle not inside the grid");
  nodes = std::max(nodes, 256);
  for (int k = 0; k < nodes; ++k) {
    const double th = 2.0 * M_PI * k / nodes;
    rep.sup_phi = std::max(
        rep.sup_phi, std::fabs(sol.phi.sample({R * std::cos(th), R * std::sin(th)})));
  }
  rep.M_R = rep.sup_phi / M_PI;
  rep.bound = R + std::sqrt(rep.M_R);
  rep.measured = sol.support_radius;
  rep.satisfied = rep.measured <= rep.bound + g.h;
  return rep;
}

ExclusionReport exclusion_check(const PointConfiguration& c,
                                const std::vector<std::size_t>& subset,
                                const BalayageOptions& opts) {
  c.validate();
  std::vector<bool> in_subset(c.points.size(), false);
  std::vector<Vec2> sub_pts;
  std::vector<int> sub_mults;
  for (std::size_t idx : subset) {
    if (idx >= c.points.size())
      throw std::out_of_range("exclusion_check: subset index");
    if (in_subset[idx]) continue;
    in_subset[idx] = true;
    sub_pts.push_back(c.points[idx]);
    sub_mults.push_back(c.multiplicities[idx]);
  }
  if (sub_pts.empty()) throw std::invalid_argument("exclusion_check: empty subset");

  const BalayageSolution sol = partial_balayage(sub_pts, sub_mults, opts);
  const GridSpec& g = sol.phi.grid;

  ExclusionReport rep;
  rep.area = sol.area;
  const double band = 1.5 * g.h;  // one-cell tolerance
  const int reach = 2;
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    if (in_subset[i]) continue;
    int ix, iy;
    if (!g.locate(c.points[i], ix, iy)) continue;  // outside the box: outside
    if (!sol.sigma_at(ix, iy)) continue;
    bool strict = true;
    for (int dy = -reach; dy <= reach && strict; ++dy) {
      for (int dx = -reach; dx <= reach && strict; ++dx) {
        const int jx = ix + dx, jy = iy + dy;
        if (jx < 0 || jy < 0 || jx >= g.nx || jy >= g.ny) { strict = false; break; }
        if (sol.sigma_at(jx, jy)) continue;
        if (dist(g.center(jx, jy), c.points[i]) <= band) strict = false;
      }
    }
    if (strict) rep.violations.push_back(i);
  }
  return rep;
}

DiskCoverReport union_of_disks_diagnostic(const BalayageSolution& sol,
                                          int max_disks) {
  const GridSpec& g = sol.phi.grid;
  std::vector<std::size_t> cells;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      if (sol.sigma_at(ix, iy)) cells.push_back(g.index(ix, iy));
  DiskCoverReport rep;
  if (cells.empty()) return rep;

  // Boundary cells: complement cells 4-adjacent to the region.
  std::vector<Vec2> boundary;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (sol.sigma_at(ix, iy)) continue;
      const bool adj = (ix > 0 && sol.sigma_at(ix - 1, iy)) ||
                       (ix < g.nx - 1 && sol.sigma_at(ix + 1, iy)) ||
                       (iy > 0 && sol.sigma_at(ix, iy - 1)) ||
                       (iy < g.ny - 1 && sol.sigma_at(ix, iy + 1));
      if (adj) boundary.push_back(g.center(ix, iy));
    }
  }

  double r_pts = 0.0;
  for (const Vec2& p : sol.points) r_pts = std::max(r_pts, norm(p));
  const double center_limit = r_pts + g.h;

  struct Cand { std::size_t cell; double inscribed; Vec2 center; };
  std::vector<Cand> cands;
  std::vector<double> inscribed_all(cells.size());
  std::vector<Vec2> centers_all(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const std::size_t i = cells[k];
    const Vec2 c = g.center(static_cast<int>(i % g.nx), static_cast<int>(i / g.nx));
    double d = std::numeric_limits<double>::infinity();
    for (const Vec2& b : boundary) d = std::min(d, dist(c, b));
    inscribed_all[k] = d;
    centers_all[k] = c;
    if (norm(c) <= center_limit) cands.push_back({k, d, c});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return a.inscribed > b.inscribed ||
           (a.inscribed == b.inscribed && a.cell < b.cell);
  });

  std::vector<bool> covered(cells.size(), false);
  std::size_t n_covered = 0;
  for (const Cand& cd : cands) {
    if (static_cast<int>(rep.centers.size()) >= max_disks) break;
    std::size_t gain = 0;
    for (std::size_t k = 0; k < cells.size(); ++k)
      if (!covered[k] && dist(centers_all[k], cd.center) <= cd.inscribed) ++gain;
    if (gain == 0) continue;
    for (std::size_t k = 0; k < cells.size(); ++k)
      if (!covered[k] && dist(centers_all[k], cd.center) <= cd.inscribed) {
        covered[k] = true;
        ++n_covered;
      }
    rep.centers.push_back(cd.center);
    rep.radii.push_back(cd.inscribed);
    if (n_covered == cells.size()) break;
  }
  rep.uncovered_fraction =
      static_cast<double>(cells.size() - n_covered) / cells.size();
  return rep;
}

std::vector<std::vector<Vec2>> region_boundary(const BalayageSolution& sol) {
  const GridSpec& g = sol.phi.grid;
  // Marching squares on cell centers at level 0.5; segment endpoints are
  // midpoints of dual edges. Indicator values make all crossings midpoints.
  auto val = [&](int ix, int iy) -> double {
    if (ix < 0 || iy < 0 || ix >= g.nx || iy >= g.ny) return 0.0;
    return sol.sigma_at(ix, iy) ? 1.0 : 0.0;
  };
  struct Seg { Vec2 a, b; };
  std::vector<Seg> segs;
  for (int iy = -1; iy < g.ny; ++iy) {
    for (int ix = -1; ix < g.nx; ++ix) {
      const double v00 = val(ix, iy), v10 = val(ix + 1, iy);
      const double v01 = val(ix, iy + 1), v11 = val(ix + 1, iy + 1);
      int code = 0;
      if (v00 > 0.5) code |= 1;
      if (v10 > 0.5) code |= 2;
      if (v11 > 0.5) code |= 4;
      if (v01 > 0.5) code |= 8;
      if (code == 0 || code == 15) continue;
      const Vec2 c00 = g.center(ix, iy);
      const Vec2 bottom{c00.x + 0.5 * g.h, c00.y};
      const Vec2 top{c00.x + 0.5 * g.h, c00.y + g.h};
      const Vec2 left{c00.x, c00.y + 0.5 * g.h};
      const Vec2 right{c00.x + g.h, c00.y + 0.5 * g.h};
      auto add = [&](Vec2 a, Vec2 b) { segs.push_back({a, b}); };
      switch (code) {
        case 1: add(left, bottom); break;
        case 2: add(bottom, right); break;
        case 3: add(left, right); break;
        case 4: add(right, top); break;
        case 5: add(left, top); add(bottom, right); break;
        case 6: add(bottom, top); break;
        case 7: add(left, top); break;
        case 8: add(top, left); break;
        case 9: add(top, bottom); break;
        case 10: add(top, right); add(left, bottom); break;
        case 11: add(top, right); break;
        case 12: add(right, left); break;
        case 13: add(right, bottom); break;
        case 14: add(bottom, left); break;
        default: break;
      }
    }
  }
  // Stitch segments into polylines by quantized endpoints.
  auto key = [&](Vec2 p) {
    const long qx = std::lround((p.x - g.origin.x) / (0.5 * g.h));
    const long qy = std::lround((p.y - g.origin.y) / (0.5 * g.h));
    return qx * 1000003L + qy;
  };
  std::multimap<long, std::size_t> by_start;
  for (std::size_t s = 0; s < segs.size(); ++s) by_start.insert({key(segs[s].a), s});
  std::vector<bool> used(segs.size(), false);
  std::vector<std::vector<Vec2>> polys;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    used[s] = true;
    std::vector<Vec2> poly{segs[s].a, segs[s].b};
    bool extended = true;
    while (extended) {
      extended = false;
      auto range = by_start.equal_range(key(poly.back()));
      for (auto it = range.first; it != range.second; ++it) {
        if (used[it->second]) continue;
        used[it->second] = true;
        poly.push_back(segs[it->second].b);
        extended = true;
        break;
      }
    }
    polys.push_back(std::move(poly));
  }
  return polys;
}

double exterior_max_ratio(const BalayageSolution& sol, int dilation_cells) {
  const GridSpec& g = sol.phi.grid;
  const int d = dilation_cells;
  double max_phi = 0.0, max_out = 0.0;
  for (double v : sol.phi.values) max_phi = std::max(max_phi, v);
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      bool near_region = false;
      for (int dy = -d; dy <= d && !near_region; ++dy) {
        for (int dx = -d; dx <= d; ++dx) {
          const int jx = ix + dx, jy = iy + dy;
          if (jx < 0 || jy < 0 || jx >= g.nx || jy >= g.ny) continue;
          if (sol.sigma_at(jx, jy)) {
            near_region = true;
            break;
          }
        }
      }
      if (!near_region)
        max_out = std::max(max_out, std::fabs(sol.phi.at(ix, iy)));
    }
  }
  return max_phi > 0.0 ? max_out / max_phi : 0.0;
}

}  // namespace jellium
