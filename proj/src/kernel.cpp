#include "jellium/kernel.hpp"

#include <cmath>
#include <vector>

namespace jellium {

double coulomb_kernel(double r) {
  if (r <= 0.0) throw std::domain_error("coulomb_kernel: r must be positive");
  return -std::log(r);
}

double disk_potential(Vec2 center, double r, double rho, Vec2 x) {
  if (r <= 0.0) throw std::domain_error("disk_potential: radius must be positive");
  const double q = M_PI * r * r * rho;
  const double d2 = norm2(x - center);
  if (d2 >= r * r) return q * (-0.5 * std::log(d2));
  return q * (-std::log(r)) + 0.5 * M_PI * rho * (r * r - d2);
}

Vec2 disk_potential_gradient(Vec2 center, double r, double rho, Vec2 x) {
  if (r <= 0.0) throw std::domain_error("disk_potential: radius must be positive");
  const Vec2 d = x - center;
  const double d2 = norm2(d);
  if (d2 >= r * r) return (-M_PI * r * r * rho / d2) * d;
  return (-M_PI * rho) * d;
}

// Corner antiderivative of log|.|: dF/dx dy = log sqrt(x^2+y^2), F odd in
// each argument, F = 0 on the axes.
static double corner_F(double x, double y) {
  if (x == 0.0 || y == 0.0) return 0.0;
  const double r2 = x * x + y * y;
  return 0.5 * (x * y * (std::log(r2) - 3.0) + x * x * std::atan(y / x) +
                y * y * std::atan(x / y));
}

static double corner_Fx(double x, double y) {
  if (y == 0.0) return 0.0;
  const double r2 = x * x + y * y;
  double v = y * (0.5 * std::log(r2) - 1.0);
  if (x != 0.0) v += x * std::atan(y / x);
  return v;
}

double rectangle_log_potential(double x0, double x1, double y0, double y1, Vec2 x) {
  return corner_F(x1 - x.x, y1 - x.y) - corner_F(x0 - x.x, y1 - x.y) -
         corner_F(x1 - x.x, y0 - x.y) + corner_F(x0 - x.x, y0 - x.y);
}

Vec2 rectangle_log_potential_gradient(double x0, double x1, double y0, double y1, Vec2 x) {
  const double gx = -(corner_Fx(x1 - x.x, y1 - x.y) - corner_Fx(x0 - x.x, y1 - x.y) -
                      corner_Fx(x1 - x.x, y0 - x.y) + corner_Fx(x0 - x.x, y0 - x.y));
  const double gy = -(corner_Fx(y1 - x.y, x1 - x.x) - corner_Fx(y0 - x.y, x1 - x.x) -
                      corner_Fx(y1 - x.y, x0 - x.x) + corner_Fx(y0 - x.y, x0 - x.x));
  return {gx, gy};
}

void gauss_legendre(int n, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p0 / pp;
      if (std::fabs(z - z1) < 1e-15) break;
    }
    const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    nodes[i] = xm - xl * z;
    nodes[n - 1 - i] = xm + xl * z;
    weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    weights[n - 1 - i] = weights[i];
  }
}

// Mean of the rectangle potential of the unit cell over a unit cell displaced
// by `offset`, by Gauss-Legendre; both cell averages reduce to this.
static double unit_cell_mean_log(Vec2 offset, int n) {
  std::vector<double> xs, wx;
  gauss_legendre(n, offset.x, offset.x + 1.0, xs, wx);
  std::vector<double> ys, wy;
  gauss_legendre(n, offset.y, offset.y + 1.0, ys, wy);
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s += wx[i] * wy[j] * rectangle_log_potential(0, 1, 0, 1, {xs[i], ys[j]});
  return s;
}

double cell_self_kernel(double h) {
  static const double unit = -unit_cell_mean_log({0, 0}, 64);
  return unit - std::log(h);
}

double cell_pair_kernel(Vec2 offset, double h) {
  if (offset.x == 0.0 && offset.y == 0.0) return cell_self_kernel(h);
  return -std::log(h) - unit_cell_mean_log({offset.x / h, offset.y / h}, 24);
}

}  // namespace jellium
