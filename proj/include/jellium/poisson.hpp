#pragma once
#include <functional>

#include "jellium/grid.hpp"

namespace jellium {

// Solves -Lap_h(phi) = rhs - mean(rhs) on the periodic grid (5-point stencil
// diagonalized in the DFT basis); the result has zero mean.
ScalarField solve_periodic_poisson(const ScalarField& rhs);

// Central-difference gradient with periodic wrap.
void gradient_periodic(const ScalarField& phi, ScalarField& gx, ScalarField& gy);

// U(x) = sum_y w(x-y) sigma(y) h^2 with w the cell-averaged -log kernel:
// exact cell-pair averages for offsets within 4 cells, -log|offset| beyond.
// Approximates the Coulomb potential of the density sigma (free boundary,
// zero-padded FFT convolution).
ScalarField log_potential_of_density(const ScalarField& sigma);

// U(x) = sum_y k(x-y) rho(y) h^2, k evaluated at cell-center offsets (free
// boundary, zero-padded FFT convolution). k must be finite on the offset grid.
ScalarField convolve_kernel(const ScalarField& rho,
                            const std::function<double(Vec2)>& kernel);

}  // namespace jellium
