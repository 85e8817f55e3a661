#pragma once
#include <cmath>
#include <vector>

namespace jellium {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// Convex hull (monotone chain), counter-clockwise, no repeated endpoint.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

// Signed distance from p to the hull boundary: positive inside, negative outside.
// Degenerate hulls (<3 vertices) give 0 for points on the segment/point, else -distance.
double hull_boundary_distance(const std::vector<Vec2>& hull, Vec2 p);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

}  // namespace jellium
