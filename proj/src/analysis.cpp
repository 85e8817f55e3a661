#include "jellium/analysis.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jellium {

SeparationReport min_pair_distance(const std::vector<Vec2>& pts, double margin,
                                   double threshold) {
  SeparationReport rep;
  rep.threshold = threshold;
  rep.min_bulk_distance = std::numeric_limits<double>::infinity();
  const std::vector<Vec2> hull = convex_hull(pts);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (hull_boundary_distance(hull, pts[i]) < margin) continue;
    ++rep.bulk_count;
    double nn = std::numeric_limits<double>::infinity();
    std::size_t nn_j = i;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      const double d = dist(pts[i], pts[j]);
      if (d < nn) { nn = d; nn_j = j; }
    }
    if (nn < rep.min_bulk_distance) rep.min_bulk_distance = nn;
    if (nn < threshold) rep.violations.emplace_back(i, nn_j);
  }
  return rep;
}

int disk_count(const PointConfiguration& c, Vec2 center, double R) {
  c.validate();
  if (R < 0.0) throw std::domain_error("disk_count: negative radius");
  int n = 0;
  for (std::size_t i = 0; i < c.points.size(); ++i)
    if (dist(c.points[i], center) <= R) n += c.multiplicities[i];
  return n;
}

IncompressibilityReport incompressibility_report(const PointConfiguration& c,
                                                 const std::vector<double>& radii,
                                                 double margin,
                                                 double center_spacing) {
  c.validate();
  if (center_spacing <= 0.0)
    throw std::domain_error("incompressibility_report: spacing must be positive");
  IncompressibilityReport rep;
  const std::vector<Vec2> hull = convex_hull(c.points);
  if (hull.empty()) return rep;

  double xlo = hull[0].x, xhi = hull[0].x, ylo = hull[0].y, yhi = hull[0].y;
  for (const Vec2& p : hull) {
    xlo = std::min(xlo, p.x); xhi = std::max(xhi, p.x);
    ylo = std::min(ylo, p.y); yhi = std::max(yhi, p.y);
  }
  std::vector<Vec2> centers;
  for (double y = ylo; y <= yhi; y += center_spacing)
    for (double x = xlo; x <= xhi; x += center_spacing)
      if (hull_boundary_distance(hull, {x, y}) >= margin) centers.push_back({x, y});
  rep.centers_tested = centers.size();

  for (double R : radii) {
    IncompressibilityEntry e;
    e.radius = R;
    const double area = M_PI * R * R;
    for (const Vec2& a : centers) {
      const double ratio = disk_count(c, a, R) / area;
      if (ratio > e.max_ratio) { e.max_ratio = ratio; e.argmax_center = a; }
    }
    rep.max_ratio = std::max(rep.max_ratio, e.max_ratio);
    rep.entries.push_back(e);
  }
  return rep;
}

}  // namespace jellium
