#include "jellium/smearing.hpp"

#include <cmath>
#include <stdexcept>

#include "jellium/kernel.hpp"

namespace jellium {

double SmearingProfile::mass() const {
  std::vector<double> xs, ws;
  gauss_legendre(64, 0.0, 1.0, xs, ws);
  double m = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) m += ws[i] * radial(xs[i]) * xs[i];
  return 2.0 * M_PI * m;
}

double SmearingProfile::potential(double t) const {
  // Newton: -log(t) * mass(<t)  +  2*pi*int_t^1 (-log s) radial(s) s ds.
  std::vector<double> xs, ws;
  double v = 0.0;
  if (t < 1.0) {
    gauss_legendre(64, std::max(t, 0.0), 1.0, xs, ws);
    for (std::size_t i = 0; i < xs.size(); ++i)
      v += ws[i] * (-std::log(xs[i])) * radial(xs[i]) * xs[i];
    v *= 2.0 * M_PI;
  }
  if (t > 0.0) {
    gauss_legendre(64, 0.0, std::min(t, 1.0), xs, ws);
    double inner = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      inner += ws[i] * radial(xs[i]) * xs[i];
    v += (-std::log(t)) * 2.0 * M_PI * inner;
  }
  return v;
}

SmearingProfile SmearingProfile::tent() {
  SmearingProfile p;
  p.name = "tent";
  const double c = 3.0 / M_PI;  // unit mass: 2*pi*int (1-s) s ds = pi/3
  p.radial = [c](double s) { return s >= 1.0 ? 0.0 : c * (1.0 - s); };
  return p;
}

void mollify_points(ScalarField& field, const std::vector<Vec2>& points,
                    const std::vector<int>& multiplicities, double eta,
                    const SmearingProfile& profile, bool periodic) {
  if (eta <= 0.0) throw std::domain_error("mollify_points: eta must be positive");
  if (points.size() != multiplicities.size())
    throw std::invalid_argument("mollify_points: size mismatch");
  const GridSpec& g = field.grid;
  const double h = g.h;
  const double Lx = g.nx * h, Ly = g.ny * h;

  for (std::size_t p = 0; p < points.size(); ++p) {
    const Vec2 c = points[p];
    if (!periodic) {
      if (c.x - eta < g.origin.x || c.y - eta < g.origin.y ||
          c.x + eta > g.origin.x + Lx || c.y + eta > g.origin.y + Ly)
        throw std::domain_error("mollify_points: bump exits non-periodic grid");
    }
    const int i0 = static_cast<int>(std::floor((c.x - eta - g.origin.x) / h)) - 1;
    const int i1 = static_cast<int>(std::floor((c.x + eta - g.origin.x) / h)) + 1;
    const int j0 = static_cast<int>(std::floor((c.y - eta - g.origin.y) / h)) - 1;
    const int j1 = static_cast<int>(std::floor((c.y + eta - g.origin.y) / h)) + 1;

    // 3x3 midpoint subsamples per cell, then rescale to exact mass.
    std::vector<std::pair<std::size_t, double>> deposit;
    double total = 0.0;
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        double w = 0.0;
        for (int sj = 0; sj < 3; ++sj) {
          for (int si = 0; si < 3; ++si) {
            const double sx = g.origin.x + (i + (si + 0.5) / 3.0) * h;
            const double sy = g.origin.y + (j + (sj + 0.5) / 3.0) * h;
            const double r = std::hypot(sx - c.x, sy - c.y) / eta;
            if (r < 1.0) w += profile.radial(r);
          }
        }
        if (w == 0.0) continue;
        int ii = i, jj = j;
        if (periodic) {
          ii = ((i % g.nx) + g.nx) % g.nx;
          jj = ((j % g.ny) + g.ny) % g.ny;
        } else if (i < 0 || j < 0 || i >= g.nx || j >= g.ny) {
          continue;
        }
        deposit.emplace_back(g.index(ii, jj), w);
        total += w;
      }
    }
    if (total == 0.0) {
      // Bump narrower than the subsample spacing: put everything in one cell.
      int ix, iy;
      Vec2 cc = c;
      if (periodic) {
        cc.x = g.origin.x + std::fmod(std::fmod(c.x - g.origin.x, Lx) + Lx, Lx);
        cc.y = g.origin.y + std::fmod(std::fmod(c.y - g.origin.y, Ly) + Ly, Ly);
      }
      if (!g.locate(cc, ix, iy))
        throw std::domain_error("mollify_points: point off grid");
      field.values[g.index(ix, iy)] += multiplicities[p] / (h * h);
      continue;
    }
    const double scale = multiplicities[p] / (total * h * h);
    for (const auto& [idx, w] : deposit) field.values[idx] += w * scale;
  }
}

}  // namespace jellium
