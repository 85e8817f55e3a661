#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "jellium/geometry.hpp"

namespace jellium {

// Uniform cell-centered grid: cell (ix,iy) has center origin + ((ix+0.5)h, (iy+0.5)h).
struct GridSpec {
  Vec2 origin;
  double h = 1.0;
  int nx = 0;
  int ny = 0;

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * nx + ix;
  }
  Vec2 center(int ix, int iy) const {
    return {origin.x + (ix + 0.5) * h, origin.y + (iy + 0.5) * h};
  }
  bool contains(Vec2 p) const {
    return p.x >= origin.x && p.y >= origin.y && p.x < origin.x + nx * h &&
           p.y < origin.y + ny * h;
  }
  bool locate(Vec2 p, int& ix, int& iy) const {
    if (!contains(p)) return false;
    ix = std::min(nx - 1, static_cast<int>((p.x - origin.x) / h));
    iy = std::min(ny - 1, static_cast<int>((p.y - origin.y) / h));
    return true;
  }

  static GridSpec centered_square(double half_side, double h) {
    int n = static_cast<int>(std::ceil(2.0 * half_side / h));
    if (n < 2) n = 2;
    GridSpec g;
    g.h = h;
    g.nx = g.ny = n;
    g.origin = {-0.5 * n * h, -0.5 * n * h};
    return g;
  }
};

struct ScalarField {
  GridSpec grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g) : grid(g), values(g.size(), 0.0) {}

  double& at(int ix, int iy) { return values[grid.index(ix, iy)]; }
  double at(int ix, int iy) const { return values[grid.index(ix, iy)]; }

  // Midpoint-rule integral over the whole grid.
  double integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * grid.h * grid.h;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
  }

  // Bilinear interpolation between cell centers; clamps to the border band.
  double sample(Vec2 p) const {
    const double fx = (p.x - grid.origin.x) / grid.h - 0.5;
    const double fy = (p.y - grid.origin.y) / grid.h - 0.5;
    int ix = static_cast<int>(std::floor(fx));
    int iy = static_cast<int>(std::floor(fy));
    double tx = fx - ix, ty = fy - iy;
    if (ix < 0) { ix = 0; tx = 0.0; }
    if (iy < 0) { iy = 0; ty = 0.0; }
    if (ix > grid.nx - 2) { ix = grid.nx - 2; tx = 1.0; }
    if (iy > grid.ny - 2) { iy = grid.ny - 2; ty = 1.0; }
    const double v00 = at(ix, iy), v10 = at(ix + 1, iy);
    const double v01 = at(ix, iy + 1), v11 = at(ix + 1, iy + 1);
    return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 +
           (1 - tx) * ty * v01 + tx * ty * v11;
  }
};

}  // namespace jellium
