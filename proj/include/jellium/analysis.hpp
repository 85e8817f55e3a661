#pragma once
#include <utility>

#include "jellium/config.hpp"

namespace jellium {

struct SeparationReport {
  double min_bulk_distance = 0.0;  // +inf when no bulk point exists
  std::size_t bulk_count = 0;
  double threshold = 0.0;
  // bulk points whose nearest neighbor is closer than the threshold
  std::vector<std::pair<std::size_t, std::size_t>> violations;
};

// Nearest-neighbor statistics over "bulk" points: those at distance >= margin
// from the boundary of the configuration's convex hull. The minimum runs from
// each bulk point to any other point.
SeparationReport min_pair_distance(const std::vector<Vec2>& pts, double margin,
                                   double threshold);

// Number of charges (with multiplicity) in the closed disk D(center, R).
int disk_count(const PointConfiguration& c, Vec2 center, double R);

struct IncompressibilityEntry {
  double radius = 0.0;
  double max_ratio = 0.0;  // max over centers of count / (pi R^2)
  Vec2 argmax_center;
};

struct IncompressibilityReport {
  std::vector<IncompressibilityEntry> entries;
  double max_ratio = 0.0;
  std::size_t centers_tested = 0;
};

// Scans disks of the given radii over a grid of centers (spacing
// center_spacing) restricted to the bulk (margin inside the convex hull).
IncompressibilityReport incompressibility_report(const PointConfiguration& c,
                                                 const std::vector<double>& radii,
                                                 double margin,
                                                 double center_spacing);

}  // namespace jellium
