#pragma once
#include "jellium/minimize.hpp"

namespace jellium {

// Hard-wall container, either the square [-L/2,L/2]^2 (size = L) or the disk
// D(0, R) (size = R).
struct ContainerSpec {
  enum class Kind { Square, Disk };
  Kind kind = Kind::Square;
  double size = 1.0;

  double area() const;
  bool contains(Vec2 p) const;
};

// Attractive potential of the neutralizing background filling the container:
// V(x) = rho * int_container log|x-y| dy (finite everywhere, exact forms).
double background_potential(const ContainerSpec& c, double rho, Vec2 x);
Vec2 background_potential_gradient(const ContainerSpec& c, double rho, Vec2 x);

// Background self-energy (rho^2/2) * iint -log|x-y| over container^2.
// Disk: closed form; square: Gauss-Legendre on the closed-form potential.
double background_self_energy(const ContainerSpec& c, double rho);

// Total jellium energy of points inside the container (pair term plus V),
// without the constant background self-energy.
double jellium_energy(const ContainerSpec& c, double rho,
                      const std::vector<Vec2>& pts);

struct ThermoPoint {
  double size = 0.0;  // L (square) or R (disk)
  int n_points = 0;
  double min_energy = 0.0;        // minimized jellium energy
  double energy_per_area = 0.0;   // (min_energy + self_energy) / area
  bool converged = false;
};

struct ThermoOptions {
  MinimizeOptions inner;
  int multistart_runs = 4;  // lattice seeds plus random starts
};

// Ground-state energy density at one container size; rho * area must be a
// near-integer (the particle number).
ThermoPoint energy_per_volume(const ContainerSpec& c, double rho,
                              const ThermoOptions& opts);

// Square containers of sides Ls.
std::vector<ThermoPoint> energy_per_volume_scan(const std::vector<double>& Ls,
                                                double rho,
                                                const ThermoOptions& opts);

}  // namespace jellium
