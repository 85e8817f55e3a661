#pragma once
#include "jellium/grid.hpp"

namespace jellium {

// Linear complementarity problem on a grid with A = -Lap_h (5-point stencil):
//   phi >= 0,  A phi - f >= 0,  phi * (A phi - f) = 0   on interior cells;
// the one-cell border ring is pinned to Dirichlet values (default 0).
// Solved by projected SOR with red-black ordering.
struct LcpOptions {
  double omega = 1.9;
  double tol = 1e-8;       // max |min(4 phi / h^2, A phi - f)| over interior
  int max_sweeps = 200000;
  int check_interval = 32;
};

struct LcpResult {
  int sweeps = 0;
  double residual = 0.0;
  bool converged = false;
};

// phi is warm start and output; f lives on the same grid (border entries
// unused). dirichlet may be empty (zero boundary) or a full-size vector whose
// border-ring values pin phi there.
LcpResult psor_solve(ScalarField& phi, const std::vector<double>& f,
                     const std::vector<double>& dirichlet, const LcpOptions& opts);

// q = A phi - f on interior cells (border entries 0).
std::vector<double> lcp_residual_field(const ScalarField& phi,
                                       const std::vector<double>& f);

}  // namespace jellium
