#pragma once
#include <cmath>
#include <string>
#include <vector>

#include "jellium/geometry.hpp"

namespace jellium {

// Labeled point charges. Multiplicity m stands for m coincident unit charges;
// sampling and minimization work with all-ones multiplicities.
struct PointConfiguration {
  std::vector<Vec2> points;
  std::vector<int> multiplicities;

  static PointConfiguration from_points(std::vector<Vec2> pts);

  std::size_t size() const { return points.size(); }
  int total_multiplicity() const;
  void validate() const;  // throws on size mismatch or multiplicity < 1
};

struct QuasiHole {
  Vec2 position;
  double coefficient = 2.0;
};

// Reduced-units energy for N mobile unit charges:
//   H(x) = beta*sum |x_j|^2 - g*sum_{i<j} log|x_i-x_j|
//          + sum_k c_k * sum_j (-log|x_j - a_k|).
// beta = pi/2, g = 1 is the neutral background of density 1.
struct PlasmaHamiltonian {
  double beta = 1.5707963267948966;  // pi/2
  double g = 1.0;
  std::vector<QuasiHole> holes;

  void validate() const;  // beta > 0, g > 0, hole coefficients > 0
  double background_density() const { return 2.0 * beta / M_PI * (1.0 / g); }
};

// Two points closer than this count as coincident (infinite energy signal).
inline constexpr double kCoincidenceThreshold = 1e-12;

// Line-oriented text form of (Hamiltonian, configuration); doubles are
// printed in shortest round-trip form so read(write(x)) is bit-exact.
std::string plasma_to_text(const PlasmaHamiltonian& h, const PointConfiguration& c);
void plasma_from_text(const std::string& text, PlasmaHamiltonian& h,
                      PointConfiguration& c);

}  // namespace jellium
