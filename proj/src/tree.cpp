#include "bsdelab/tree.hpp"

#include <cmath>
#include <stdexcept>

namespace bsdelab {

double TreeSolution::w_value(int n, int j) const {
    return (2.0 * j - n) * std::sqrt(grid.dt());
}

TreeSolution tree_backward(const Generator& g, const TimeGrid& grid, int n_hi, int n_lo,
                           std::vector<double> values_at_hi) {
    if (n_lo < 0 || n_hi > grid.steps || n_lo > n_hi)
        throw std::invalid_argument("tree_backward: bad level range");
    if (static_cast<int>(values_at_hi.size()) != n_hi + 1)
        throw std::invalid_argument("tree_backward: values size must be n_hi + 1");
    const double dt = grid.dt();
    if (g.lipschitz_k * dt >= 1.0)
        throw std::invalid_argument("tree_backward: K*dt >= 1, fixed point does not contract");

    TreeSolution sol;
    sol.grid = grid;
    sol.y.assign(n_hi + 1, {});
    sol.z.assign(n_hi + 1, {});
    sol.y[n_hi] = std::move(values_at_hi);

    const double sqrt_dt = std::sqrt(dt);
    for (int n = n_hi - 1; n >= n_lo; --n) {
        sol.y[n].resize(n + 1);
        sol.z[n].resize(n + 1);
        const double t = grid.node(n);
        for (int j = 0; j <= n; ++j) {
            const double up = sol.y[n + 1][j + 1];
            const double down = sol.y[n + 1][j];
            const double zeta = (up - down) / (2.0 * sqrt_dt);
            const double target = 0.5 * (up + down);
            double y = target;
            for (int it = 0; it < 200; ++it) {
                const double next = target + dt * g(t, y, zeta);
                if (std::abs(next - y) <= 1e-15 * (1.0 + std::abs(next))) {
                    y = next;
                    break;
                }
                y = next;
            }
            sol.y[n][j] = y;
            sol.z[n][j] = zeta;
        }
    }
    return sol;
}

TreeSolution solve_tree(const Generator& g, const std::function<double(double)>& xi_of_w,
                        double horizon, int steps) {
    if (steps < 1 || steps > kTreeMaxSteps)
        throw std::invalid_argument("solve_tree: steps must be in [1, 24]");
    const TimeGrid grid{horizon, steps};
    const double sqrt_dt = std::sqrt(grid.dt());
    std::vector<double> terminal(steps + 1);
    for (int j = 0; j <= steps; ++j) terminal[j] = xi_of_w((2.0 * j - steps) * sqrt_dt);
    return tree_backward(g, grid, steps, 0, std::move(terminal));
}

} // namespace bsdelab
