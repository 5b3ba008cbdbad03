#include "bsdelab/brownian.hpp"

#include <cmath>
#include <stdexcept>

#include "bsdelab/parallel.hpp"
#include "bsdelab/rng.hpp"

namespace bsdelab {

namespace {
constexpr std::uint32_t kBrownianStream = 0;
}

BrownianPaths simulate_brownian(const TimeGrid& grid, int dim, int paths,
                                std::uint64_t seed, int jobs) {
    if (dim < 1) throw std::invalid_argument("simulate_brownian: dim must be >= 1");
    if (paths < 1) throw std::invalid_argument("simulate_brownian: paths must be >= 1");

    BrownianPaths out;
    out.grid = grid;
    out.dim = dim;
    out.paths = paths;
    out.seed = seed;
    out.increments.resize(static_cast<std::size_t>(paths) * grid.steps * dim);

    const double sqrt_dt = std::sqrt(grid.dt());
    const RandomField field(seed, kBrownianStream);
    for_each_block(paths, jobs, [&](int, int begin, int end) {
        for (int m = begin; m < end; ++m) {
            for (int n = 0; n < grid.steps; ++n) {
                for (int k = 0; k < dim; ++k) {
                    out.increments[(static_cast<std::size_t>(m) * grid.steps + n) * dim + k] =
                        sqrt_dt * field.normal(static_cast<std::uint32_t>(m),
                                               static_cast<std::uint32_t>(n),
                                               static_cast<std::uint32_t>(k));
                }
            }
        }
    });
    return out;
}

std::vector<double> BrownianPaths::levels(int jobs) const {
    const int n_nodes = grid.nodes();
    std::vector<double> w(static_cast<std::size_t>(paths) * n_nodes * dim, 0.0);
    for_each_block(paths, jobs, [&](int, int begin, int end) {
        for (int m = begin; m < end; ++m) {
            const std::size_t base = static_cast<std::size_t>(m) * n_nodes * dim;
            for (int n = 0; n < grid.steps; ++n) {
                for (int k = 0; k < dim; ++k) {
                    w[base + static_cast<std::size_t>(n + 1) * dim + k] =
                        w[base + static_cast<std::size_t>(n) * dim + k] + dw(m, n, k);
                }
            }
        }
    });
    return w;
}

BrownianPaths coarsen(const BrownianPaths& fine, int factor) {
    if (factor < 1 || fine.grid.steps % factor != 0)
        throw std::invalid_argument("coarsen: factor must divide the step count");
    BrownianPaths out;
    out.grid = TimeGrid{fine.grid.horizon, fine.grid.steps / factor};
    out.dim = fine.dim;
    out.paths = fine.paths;
    out.seed = fine.seed;
    out.increments.assign(
        static_cast<std::size_t>(out.paths) * out.grid.steps * out.dim, 0.0);
    for (int m = 0; m < out.paths; ++m) {
        for (int n = 0; n < out.grid.steps; ++n) {
            for (int k = 0; k < out.dim; ++k) {
                double sum = 0.0;
                for (int j = 0; j < factor; ++j) sum += fine.dw(m, n * factor + j, k);
                out.increments[(static_cast<std::size_t>(m) * out.grid.steps + n) * out.dim + k] = sum;
            }
        }
    }
    return out;
}

} // namespace bsdelab
