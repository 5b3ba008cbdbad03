#pragma once

#include <functional>
#include <vector>

#include "bsdelab/generator.hpp"
#include "bsdelab/time_grid.hpp"

namespace bsdelab {

// Exact dynamic programming on a recombining binomial lattice (d = 1):
// increments +/- sqrt(dt) with probability 1/2 each, so conditional
// expectations are exact two-point averages. Brute-force oracle at small N.
struct TreeSolution {
    TimeGrid grid;
    std::vector<std::vector<double>> y; // y[n][j], j = number of up moves
    std::vector<std::vector<double>> z; // z[n][j], n < steps

    double y0() const { return y[0][0]; }
    // Lattice value of W at (level n, up count j).
    double w_value(int n, int j) const;
};

inline constexpr int kTreeMaxSteps = 24;

TreeSolution solve_tree(const Generator& g, const std::function<double(double)>& xi_of_w,
                        double horizon, int steps);

// Backward sweep from level n_hi (given values per lattice node) to level n_lo.
TreeSolution tree_backward(const Generator& g, const TimeGrid& grid, int n_hi, int n_lo,
                           std::vector<double> values_at_hi);

} // namespace bsdelab
