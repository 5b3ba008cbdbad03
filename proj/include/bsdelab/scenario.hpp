#pragma once

#include <optional>
#include <utility>

#include "bsdelab/brownian.hpp"
#include "bsdelab/enlargement.hpp"
#include "bsdelab/forward.hpp"
#include "bsdelab/path_view.hpp"

namespace bsdelab {

// Bundles the simulated randomness shared by one experiment: Brownian paths,
// the optional enlargement variable, and optional forward-diffusion states.
// Immutable after construction; safe to share read-only across threads.
class Scenario {
public:
    explicit Scenario(BrownianPaths paths,
                      std::optional<EnlargementVariable> enlargement = std::nullopt,
                      std::optional<ForwardPaths> forward = std::nullopt, int jobs = 1)
        : paths_(std::move(paths)),
          enlargement_(std::move(enlargement)),
          forward_(std::move(forward)),
          levels_(paths_.levels(jobs)) {}

    const TimeGrid& grid() const { return paths_.grid; }
    int path_count() const { return paths_.paths; }
    int dim() const { return paths_.dim; }
    std::uint64_t seed() const { return paths_.seed; }
    const BrownianPaths& brownian() const { return paths_; }
    double dw(int m, int n, int k = 0) const { return paths_.dw(m, n, k); }

    bool has_enlargement() const { return enlargement_.has_value(); }
    const EnlargementVariable& enlargement() const { return *enlargement_; }
    bool has_forward() const { return forward_.has_value(); }
    const ForwardPaths& forward() const { return *forward_; }

    PathView view(int m) const {
        PathView v;
        v.m = m;
        v.grid = &paths_.grid;
        v.dim = paths_.dim;
        const std::size_t wlen = static_cast<std::size_t>(paths_.grid.nodes()) * paths_.dim;
        v.w_levels = {levels_.data() + static_cast<std::size_t>(m) * wlen, wlen};
        if (forward_) {
            v.state_dim = forward_->state_dim;
            const std::size_t flen =
                static_cast<std::size_t>(paths_.grid.nodes()) * forward_->state_dim;
            v.forward = {forward_->states.data() + static_cast<std::size_t>(m) * flen, flen};
        }
        if (enlargement_) {
            v.u_atom = enlargement_->atom_index[m];
            v.u = enlargement_->value(m);
        }
        return v;
    }

private:
    BrownianPaths paths_;
    std::optional<EnlargementVariable> enlargement_;
    std::optional<ForwardPaths> forward_;
    std::vector<double> levels_;
};

inline Scenario make_scenario(const TimeGrid& grid, int dim, int paths,
                              std::uint64_t seed, int jobs = 1) {
    return Scenario(simulate_brownian(grid, dim, paths, seed, jobs), std::nullopt,
                    std::nullopt, jobs);
}

} // namespace bsdelab
