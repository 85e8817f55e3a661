#pragma once
#include <stdexcept>

#include "jellium/geometry.hpp"

namespace jellium {

// 2D Coulomb kernel, -log|x|. Throws std::domain_error for r <= 0.
double coulomb_kernel(double r);

// Potential at x of a uniform charge of density rho on the disk D(center, r).
// Closed form: outside the disk it equals the potential of the full charge
// placed at the center; inside it is quadratic.
double disk_potential(Vec2 center, double r, double rho, Vec2 x);
Vec2 disk_potential_gradient(Vec2 center, double r, double rho, Vec2 x);

// Potential at x of a uniform unit-density charge on the axis-aligned
// rectangle [x0,x1]x[y0,y1], with the +log sign:
//   V(x) = integral over the rectangle of log|x - y| dy.
// Exact corner antiderivative; valid inside and outside.
double rectangle_log_potential(double x0, double x1, double y0, double y1, Vec2 x);
Vec2 rectangle_log_potential_gradient(double x0, double x1, double y0, double y1, Vec2 x);

// Mean of -log|u - v| over independent u, v uniform in an h x h cell,
// i.e. the cell self-interaction of the Coulomb kernel.
double cell_self_kernel(double h);

// Mean of -log|offset + u - v| for u, v uniform in an h x h cell. Matches
// -log|offset| to O(h^2/|offset|^2); used for near-field cell averages.
double cell_pair_kernel(Vec2 offset, double h);

// n-point Gauss-Legendre nodes/weights on [a, b].
void gauss_legendre(int n, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace jellium
