#pragma once
#include <functional>
#include <string>
#include <vector>

#include "jellium/grid.hpp"

namespace jellium {

// Radial charge profile supported in the unit disk with total mass 1.
struct SmearingProfile {
  std::string name;
  std::function<double(double)> radial;  // density at radius s in [0,1]

  double mass() const;        // 2*pi*int_0^1 radial(s) s ds, should be 1
  double potential(double t) const;  // -log kernel potential at radius t, t >= 0

  // Linear ramp (1-s), normalized to unit mass.
  static SmearingProfile tent();
};

// Deposits scaled bumps eta^-2 * radial(|x-p|/eta) for each point onto the
// grid, weighted by multiplicity. Each bump is normalized after cell
// quadrature so the deposited mass is exactly the total multiplicity.
// Periodic grids wrap the bump across edges; otherwise bumps must fit inside.
void mollify_points(ScalarField& field, const std::vector<Vec2>& points,
                    const std::vector<int>& multiplicities, double eta,
                    const SmearingProfile& profile, bool periodic);

}  // namespace jellium
