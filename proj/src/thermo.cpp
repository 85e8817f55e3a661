#include "jellium/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jellium/kernel.hpp"
#include "jellium/rng.hpp"

namespace jellium {

double ContainerSpec::area() const {
  return kind == Kind::Square ? size * size : M_PI * size * size;
}

bool ContainerSpec::contains(Vec2 p) const {
  if (kind == Kind::Square)
    return std::fabs(p.x) <= 0.5 * size && std::fabs(p.y) <= 0.5 * size;
  return norm2(p) <= size * size;
}

double background_potential(const ContainerSpec& c, double rho, Vec2 x) {
  if (c.kind == ContainerSpec::Kind::Square) {
    const double half = 0.5 * c.size;
    return rho * rectangle_log_potential(-half, half, -half, half, x);
  }
  return -disk_potential({0, 0}, c.size, rho, x);
}

Vec2 background_potential_gradient(const ContainerSpec& c, double rho, Vec2 x) {
  if (c.kind == ContainerSpec::Kind::Square) {
    const double half = 0.5 * c.size;
    return rho * rectangle_log_potential_gradient(-half, half, -half, half, x);
  }
  return -1.0 * disk_potential_gradient({0, 0}, c.size, rho, x);
}

double background_self_energy(const ContainerSpec& c, double rho) {
  if (c.kind == ContainerSpec::Kind::Disk) {
    const double R = c.size;
    return rho * rho * 0.5 * M_PI * M_PI * R * R * R * R * (0.25 - std::log(R));
  }
  // E = -(rho/2) * int_box V; V is analytic inside, Gauss-Legendre nails it.
  const double half = 0.5 * c.size;
  std::vector<double> xs, ws;
  gauss_legendre(64, -half, half, xs, ws);
  double integral = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j)
      integral += ws[i] * ws[j] *
                  rectangle_log_potential(-half, half, -half, half, {xs[i], xs[j]});
  return -0.5 * rho * rho * integral;
}

double jellium_energy(const ContainerSpec& c, double rho,
                      const std::vector<Vec2>& pts) {
  double e = 0.0;
  for (const Vec2& p : pts) e += background_potential(c, rho, p);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d2 = norm2(pts[i] - pts[j]);
      if (d2 < kCoincidenceThreshold * kCoincidenceThreshold)
        return std::numeric_limits<double>::infinity();
      e -= 0.5 * std::log(d2);
    }
  }
  return e;
}

namespace {

std::vector<Vec2> lattice_start(const ContainerSpec& c, int n, bool staggered,
                                std::uint64_t seed) {
  // Square lattice near the background density, with a small deterministic
  // jitter to break symmetry.
  double a = std::sqrt(c.area() / n);
  std::vector<Vec2> cand;
  if (c.kind == ContainerSpec::Kind::Square) {
    // Cell-centered cols x rows grid commensurate with the box; trimming a
    // radial blob out of a larger lattice instead seeds ragged edges that
    // relax into trapped defects.
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    const int rows = (n + cols - 1) / cols;
    const double ax = c.size / cols;
    const double ay = c.size / rows;
    a = std::min(ax, ay);
    for (int j = 0; j < rows; ++j) {
      for (int i = 0; i < cols; ++i) {
        const double off = staggered && (j % 2 != 0) ? 0.5 * ax : 0.0;
        double x = -0.5 * c.size + (i + 0.5) * ax + off;
        if (x > 0.5 * c.size) x -= c.size;  // staggered overflow wraps
        cand.push_back({x, -0.5 * c.size + (j + 0.5) * ay});
      }
    }
  } else {
    // Disk: trim to the n cells closest to the center; shrink the spacing a
    // few percent at a time when the rim clips the count below n.
    for (int attempt = 0; attempt < 12; ++attempt) {
      cand.clear();
      const int m = static_cast<int>(std::ceil(c.size / a)) + 2;
      for (int j = -m; j <= m; ++j) {
        for (int i = -m; i <= m; ++i) {
          Vec2 p{(i + (staggered && (j % 2 != 0) ? 0.5 : 0.0)) * a, j * a};
          if (c.contains(p)) cand.push_back(p);
        }
      }
      if (static_cast<int>(cand.size()) >= n) break;
      a *= 0.97;
    }
  }
  std::sort(cand.begin(), cand.end(), [](Vec2 u, Vec2 v) {
    const double a2 = norm2(u), b2 = norm2(v);
    return a2 < b2 || (a2 == b2 && (u.y < v.y || (u.y == v.y && u.x < v.x)));
  });
  if (static_cast<int>(cand.size()) < n)
    throw std::runtime_error("lattice_start: container too small");
  cand.resize(n);
  Rng rng(seed);
  for (Vec2& p : cand) {
    Vec2 q{p.x + 0.01 * a * (rng.uniform() - 0.5),
           p.y + 0.01 * a * (rng.uniform() - 0.5)};
    if (c.contains(q)) p = q;
  }
  return cand;
}

std::vector<Vec2> triangular_start(const ContainerSpec& c, int n,
                                   std::uint64_t seed) {
  // Triangular lattice near the background density, trimmed like the square
  // one; this is the crystal the log gas actually favors, so it seeds the
  // right basin at sizes where a square start relaxes into trapped defects.
  double a = std::sqrt(c.area() / n * 2.0 / std::sqrt(3.0));
  std::vector<Vec2> cand;
  for (int attempt = 0; attempt < 12; ++attempt) {
    cand.clear();
    const double extent = c.kind == ContainerSpec::Kind::Square ? 0.5 * c.size
                                                                : c.size;
    const int m = static_cast<int>(std::ceil(extent / (0.5 * a))) + 2;
    for (int j = -m; j <= m; ++j) {
      for (int i = -m; i <= m; ++i) {
        Vec2 p{(i + (j % 2 != 0 ? 0.5 : 0.0)) * a,
               j * a * 0.5 * std::sqrt(3.0)};
        if (c.contains(p)) cand.push_back(p);
      }
    }
    if (static_cast<int>(cand.size()) >= n) break;
    a *= 0.97;
  }
  std::sort(cand.begin(), cand.end(), [](Vec2 u, Vec2 v) {
    const double a2 = norm2(u), b2 = norm2(v);
    return a2 < b2 || (a2 == b2 && (u.y < v.y || (u.y == v.y && u.x < v.x)));
  });
  if (static_cast<int>(cand.size()) < n)
    throw std::runtime_error("triangular_start: container too small");
  cand.resize(n);
  Rng rng(seed);
  for (Vec2& p : cand) {
    Vec2 q{p.x + 0.01 * a * (rng.uniform() - 0.5),
           p.y + 0.01 * a * (rng.uniform() - 0.5)};
    if (c.contains(q)) p = q;
  }
  return cand;
}

std::vector<Vec2> random_start(const ContainerSpec& c, int n, std::uint64_t seed) {
  Rng rng(seed);
  const double half = c.kind == ContainerSpec::Kind::Square ? 0.5 * c.size : c.size;
  std::vector<Vec2> pts;
  while (static_cast<int>(pts.size()) < n) {
    const Vec2 p{rng.uniform(-half, half), rng.uniform(-half, half)};
    if (!c.contains(p)) continue;
    bool clash = false;
    for (const Vec2& q : pts)
      if (dist(p, q) < 1e-6) { clash = true; break; }
    if (!clash) pts.push_back(p);
  }
  return pts;
}

}  // namespace

ThermoPoint energy_per_volume(const ContainerSpec& c, double rho,
                              const ThermoOptions& opts) {
  const double n_real = rho * c.area();
  const int n = static_cast<int>(std::lround(n_real));
  if (n < 1 || std::fabs(n_real - n) > 1e-6)
    throw std::domain_error("energy_per_volume: rho * area must be an integer");

  // Minimize the full extensive energy, self-term included. The constant
  // shift changes no minimizer, but the relative gradient stop then scales
  // with the physical O(L^2) energy instead of the O(L^4 log L) background
  // offset, which at large boxes would accept configurations with O(1)
  // unbalanced forces.
  const double self = background_self_energy(c, rho);
  Objective obj;
  obj.energy = [c, rho, self](const std::vector<Vec2>& p) {
    return jellium_energy(c, rho, p) + self;
  };
  obj.gradient = [c, rho](const std::vector<Vec2>& pts) {
    std::vector<Vec2> g(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
      g[i] = background_potential_gradient(c, rho, pts[i]);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const Vec2 d = pts[i] - pts[j];
        const Vec2 f = (1.0 / norm2(d)) * d;
        g[i] = g[i] - f;
        g[j] = g[j] + f;
      }
    }
    return g;
  };
  obj.feasible = [c](Vec2 p) { return c.contains(p); };

  std::vector<std::vector<Vec2>> inits;
  inits.push_back(lattice_start(c, n, false, derive_seed(opts.inner.seed, 1000)));
  inits.push_back(lattice_start(c, n, true, derive_seed(opts.inner.seed, 1001)));
  inits.push_back(triangular_start(c, n, derive_seed(opts.inner.seed, 1002)));
  for (int r = static_cast<int>(inits.size()); r < opts.multistart_runs; ++r)
    inits.push_back(random_start(c, n, derive_seed(opts.inner.seed, r)));

  const MinimizeResult best = multistart_minimize_inits(obj, inits, opts.inner);

  ThermoPoint tp;
  tp.size = c.size;
  tp.n_points = n;
  tp.min_energy = best.energy - self;
  tp.energy_per_area = best.energy / c.area();
  tp.converged = best.converged;
  return tp;
}

std::vector<ThermoPoint> energy_per_volume_scan(const std::vector<double>& Ls,
                                                double rho,
                                                const ThermoOptions& opts) {
  std::vector<ThermoPoint> out;
  for (double L : Ls) {
    ContainerSpec c{ContainerSpec::Kind::Square, L};
    out.push_back(energy_per_volume(c, rho, opts));
  }
  return out;
}

}  // namespace jellium
