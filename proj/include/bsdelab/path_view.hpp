#pragma once

#include <span>

#include "bsdelab/time_grid.hpp"

namespace bsdelab {

// Read-only view of one simulated path: Brownian levels at every node, the
// forward-diffusion states when present, and the enlargement draw when present.
struct PathView {
    int m = 0;                       // path index
    const TimeGrid* grid = nullptr;
    int dim = 1;                     // Brownian dimension d
    int state_dim = 0;               // forward dimension (0 when absent)
    std::span<const double> w_levels;   // (N+1)*dim
    std::span<const double> forward;    // (N+1)*state_dim, empty when absent
    double u = 0.0;                  // enlargement value
    int u_atom = -1;                 // -1 when no enlargement

    double w(int n, int k = 0) const { return w_levels[static_cast<std::size_t>(n) * dim + k]; }
    double x(int n, int j = 0) const { return forward[static_cast<std::size_t>(n) * state_dim + j]; }
    bool has_forward() const { return state_dim > 0; }
    bool has_enlargement() const { return u_atom >= 0; }
};

} // namespace bsdelab
