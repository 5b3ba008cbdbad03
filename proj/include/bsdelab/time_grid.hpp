#pragma once

#include <stdexcept>

namespace bsdelab {

// Uniform discretization of [0, T] into N steps.
struct TimeGrid {
    double horizon = 1.0;
    int steps = 1;

    double dt() const noexcept { return horizon / steps; }

    // node(0) = 0, node(steps) = horizon exactly.
    double node(int n) const noexcept {
        return horizon * (static_cast<double>(n) / static_cast<double>(steps));
    }

    int nodes() const noexcept { return steps + 1; }
};

inline TimeGrid make_grid(double horizon, int steps) {
    if (!(horizon > 0.0)) throw std::invalid_argument("make_grid: horizon must be positive");
    if (steps < 1) throw std::invalid_argument("make_grid: steps must be >= 1");
    return TimeGrid{horizon, steps};
}

} // namespace bsdelab
