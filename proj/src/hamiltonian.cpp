#include "jellium/hamiltonian.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jellium {

static constexpr double kInf = std::numeric_limits<double>::infinity();

double plasma_energy(const PlasmaHamiltonian& h, const std::vector<Vec2>& pts) {
  const std::size_t n = pts.size();
  double e = 0.0;
  for (const Vec2& p : pts) e += h.beta * norm2(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d2 = norm2(pts[i] - pts[j]);
      if (d2 < kCoincidenceThreshold * kCoincidenceThreshold) return kInf;
      e -= 0.5 * h.g * std::log(d2);
    }
  }
  for (const auto& hole : h.holes) {
    for (const Vec2& p : pts) {
      const double d2 = norm2(p - hole.position);
      if (d2 < kCoincidenceThreshold * kCoincidenceThreshold) return kInf;
      e -= 0.5 * hole.coefficient * std::log(d2);
    }
  }
  return e;
}

double plasma_energy(const PlasmaHamiltonian& h, const PointConfiguration& c) {
  c.validate();
  for (int m : c.multiplicities)
    if (m > 1) return kInf;  // m coincident charges
  return plasma_energy(h, c.points);
}

std::vector<Vec2> plasma_gradient(const PlasmaHamiltonian& h,
                                  const std::vector<Vec2>& pts) {
  const std::size_t n = pts.size();
  std::vector<Vec2> grad(n);
  for (std::size_t i = 0; i < n; ++i) grad[i] = 2.0 * h.beta * pts[i];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 d = pts[i] - pts[j];
      const Vec2 f = (h.g / norm2(d)) * d;
      grad[i] = grad[i] - f;
      grad[j] = grad[j] + f;
    }
  }
  for (const auto& hole : h.holes) {
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 d = pts[i] - hole.position;
      grad[i] = grad[i] - (hole.coefficient / norm2(d)) * d;
    }
  }
  return grad;
}

double plasma_energy_delta(const PlasmaHamiltonian& h, const std::vector<Vec2>& pts,
                           std::size_t idx, Vec2 to) {
  const Vec2 from = pts[idx];
  double d = h.beta * (norm2(to) - norm2(from));
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (j == idx) continue;
    const double dn = norm2(to - pts[j]);
    if (dn < kCoincidenceThreshold * kCoincidenceThreshold) return kInf;
    d -= 0.5 * h.g * (std::log(dn) - std::log(norm2(from - pts[j])));
  }
  for (const auto& hole : h.holes) {
    const double dn = norm2(to - hole.position);
    if (dn < kCoincidenceThreshold * kCoincidenceThreshold) return kInf;
    d -= 0.5 * hole.coefficient *
         (std::log(dn) - std::log(norm2(from - hole.position)));
  }
  return d;
}

LaughlinMap laughlin_to_plasma(double B, double ell,
                               const std::vector<QuasiHole>& holes) {
  if (!(B > 0.0) || !(ell > 0.0))
    throw std::domain_error("laughlin_to_plasma: B and ell must be positive");
  LaughlinMap m;
  m.scale = std::sqrt(2.0 * M_PI * ell / B);
  m.original.beta = 0.5 * B;
  m.original.g = 2.0 * ell;
  m.original.holes = holes;
  m.reduced.beta = 0.5 * M_PI;
  m.reduced.g = 1.0;
  for (const auto& q : holes) {
    QuasiHole r;
    r.position = (1.0 / m.scale) * q.position;
    r.coefficient = q.coefficient / (2.0 * ell);
    m.reduced.holes.push_back(r);
  }
  m.original.validate();
  m.reduced.validate();
  return m;
}

SuperharmonicityReport superharmonicity_check(
    const std::function<double(Vec2)>& potential,
    const std::vector<Vec2>& singularities, const std::vector<DiskSpec>& disks,
    int nodes, double tol) {
  SuperharmonicityReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < disks.size(); ++d) {
    const DiskSpec& disk = disks[d];
    bool skip = false;
    for (const Vec2& s : singularities)
      if (dist(s, disk.center) <= disk.radius) { skip = true; break; }
    if (skip) {
      rep.skipped.push_back(d);
      continue;
    }
    double mean = 0.0;
    for (int k = 0; k < nodes; ++k) {
      const double th = 2.0 * M_PI * k / nodes;
      mean += potential({disk.center.x + disk.radius * std::cos(th),
                         disk.center.y + disk.radius * std::sin(th)});
    }
    mean /= nodes;
    const double margin = potential(disk.center) - mean;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < -tol) rep.passed = false;
  }
  if (!std::isfinite(rep.worst_margin)) rep.worst_margin = 0.0;  // all skipped
  return rep;
}

std::function<double(Vec2)> hole_potential(const std::vector<QuasiHole>& holes) {
  return [holes](Vec2 x) {
    double v = 0.0;
    for (const auto& q : holes) v -= q.coefficient * std::log(dist(x, q.position));
    return v;
  };
}

std::vector<Vec2> hole_singularities(const std::vector<QuasiHole>& holes) {
  std::vector<Vec2> s;
  for (const auto& q : holes) s.push_back(q.position);
  return s;
}

}  // namespace jellium
