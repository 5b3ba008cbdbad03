#pragma once

#include <cstdint>
#include <vector>

#include "bsdelab/time_grid.hpp"

namespace bsdelab {

// Seeded d-dimensional Brownian increments over a time grid. Increments are the
// stored primitive; running values W are rebuilt by left-to-right prefix sums so
// they never depend on accumulation order.
struct BrownianPaths {
    TimeGrid grid;
    int dim = 1;
    int paths = 1;
    std::uint64_t seed = 0;
    std::vector<double> increments; // [(m*N + n)*dim + k]

    double dw(int m, int n, int k = 0) const {
        return increments[(static_cast<std::size_t>(m) * grid.steps + n) * dim + k];
    }

    // W at every node, laid out [(m*(N+1) + n)*dim + k]. W_0 = 0.
    std::vector<double> levels(int jobs = 1) const;
};

BrownianPaths simulate_brownian(const TimeGrid& grid, int dim, int paths,
                                std::uint64_t seed, int jobs = 1);

// Merges groups of `factor` consecutive increments; the result is a Brownian
// path set on the coarsened grid coupled to the fine one.
BrownianPaths coarsen(const BrownianPaths& fine, int factor);

} // namespace bsdelab
