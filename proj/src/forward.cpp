#include "bsdelab/forward.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "bsdelab/errors.hpp"
#include "bsdelab/parallel.hpp"
#include "bsdelab/rng.hpp"

namespace bsdelab {

ForwardPaths euler_maruyama(const ForwardModel& model, const BrownianPaths& paths,
                            int start_node, std::span<const double> start_point,
                            int jobs) {
    const TimeGrid& grid = paths.grid;
    if (start_node < 0 || start_node > grid.steps)
        throw std::invalid_argument("euler_maruyama: start node outside grid");
    if (static_cast<int>(start_point.size()) != model.state_dim)
        throw std::invalid_argument("euler_maruyama: start point dimension mismatch");
    if (model.noise_dim != paths.dim)
        throw std::invalid_argument("euler_maruyama: model/path noise dimension mismatch");

    ForwardPaths out;
    out.grid = grid;
    out.state_dim = model.state_dim;
    out.paths = paths.paths;
    out.start_node = start_node;
    out.start_point.assign(start_point.begin(), start_point.end());
    out.states.resize(static_cast<std::size_t>(paths.paths) * grid.nodes() * model.state_dim);

    const double dt = grid.dt();
    const int md = model.state_dim;
    const int nd = model.noise_dim;

    std::atomic<long> fail_path{-1}, fail_node{-1};
    for_each_block(paths.paths, jobs, [&](int, int begin, int end) {
        std::vector<double> b(md), sig(static_cast<std::size_t>(md) * nd), x(md);
        for (int m = begin; m < end; ++m) {
            const std::size_t base = static_cast<std::size_t>(m) * grid.nodes() * md;
            for (int j = 0; j < md; ++j) x[j] = start_point[j];
            for (int n = 0; n <= start_node; ++n)
                for (int j = 0; j < md; ++j) out.states[base + static_cast<std::size_t>(n) * md + j] = x[j];
            for (int n = start_node; n < grid.steps; ++n) {
                const double t = grid.node(n);
                model.drift(t, x, b);
                model.diffusion(t, x, sig);
                for (int j = 0; j < md; ++j) {
                    double next = x[j] + b[j] * dt;
                    for (int k = 0; k < nd; ++k)
                        next += sig[static_cast<std::size_t>(j) * nd + k] * paths.dw(m, n, k);
                    if (!std::isfinite(next)) {
                        fail_path.store(m);
                        fail_node.store(n + 1);
                        return;
                    }
                    x[j] = next;
                }
                for (int j = 0; j < md; ++j)
                    out.states[base + static_cast<std::size_t>(n + 1) * md + j] = x[j];
            }
        }
    });
    if (fail_path.load() >= 0)
        throw NumericalFailure("euler_maruyama: non-finite state", fail_path.load(),
                               fail_node.load());
    return out;
}

namespace {

double coef_norm(const ForwardModel& model, double t, std::span<const double> x,
                 std::vector<double>& b, std::vector<double>& sig) {
    model.drift(t, x, b);
    model.diffusion(t, x, sig);
    double nb = 0.0, ns = 0.0;
    for (double v : b) nb += v * v;
    for (double v : sig) ns += v * v;
    return std::sqrt(nb) + std::sqrt(ns);
}

double coef_diff(const ForwardModel& model, double t, std::span<const double> x,
                 std::span<const double> y, std::vector<double>& scratch_b,
                 std::vector<double>& scratch_s) {
    std::vector<double> b2(model.state_dim), s2(static_cast<std::size_t>(model.state_dim) * model.noise_dim);
    model.drift(t, x, scratch_b);
    model.diffusion(t, x, scratch_s);
    model.drift(t, y, b2);
    model.diffusion(t, y, s2);
    double nb = 0.0, ns = 0.0;
    for (std::size_t i = 0; i < scratch_b.size(); ++i) {
        const double d = scratch_b[i] - b2[i];
        nb += d * d;
    }
    for (std::size_t i = 0; i < scratch_s.size(); ++i) {
        const double d = scratch_s[i] - s2[i];
        ns += d * d;
    }
    return std::sqrt(nb) + std::sqrt(ns);
}

} // namespace

HAssumptionReport check_h_assumptions(const ForwardModel& model, int probes,
                                      std::uint64_t seed, const HProbeOptions& opts) {
    if (probes < 1) throw std::invalid_argument("check_h_assumptions: probes must be >= 1");

    HAssumptionReport rep;
    rep.declared_l1 = model.lipschitz_l1;
    rep.declared_l2 = model.growth_l2;

    const RandomField field(seed, 100);
    const int md = model.state_dim;
    std::vector<double> x(md), y(md), b(md), sig(static_cast<std::size_t>(md) * model.noise_dim);

    for (int i = 0; i < probes; ++i) {
        const auto p = static_cast<std::uint32_t>(i);
        const double t = opts.horizon * field.uniform(p, 0, 0);
        double dist2 = 0.0;
        for (int j = 0; j < md; ++j) {
            x[j] = opts.box_radius * (2.0 * field.uniform(p, 1, static_cast<std::uint32_t>(j)) - 1.0);
            y[j] = opts.box_radius * (2.0 * field.uniform(p, 2, static_cast<std::uint32_t>(j)) - 1.0);
            const double d = x[j] - y[j];
            dist2 += d * d;
        }
        const double dist = std::sqrt(dist2);
        if (dist > 1e-12)
            rep.max_lipschitz_ratio =
                std::max(rep.max_lipschitz_ratio, coef_diff(model, t, x, y, b, sig) / dist);

        double xnorm = 0.0;
        for (int j = 0; j < md; ++j) xnorm += x[j] * x[j];
        xnorm = std::sqrt(xnorm);
        rep.max_growth_ratio =
            std::max(rep.max_growth_ratio, coef_norm(model, t, x, b, sig) / (1.0 + xnorm));

    }

    // One-sided difference probes for right/left continuity on a deterministic
    // time ladder (so jump times like k/128 are actually visited), at a few
    // sampled states.
    const int t_ladder = 128;
    const double h = 1e-7;
    for (int i = 0; i <= t_ladder; ++i) {
        const double t = opts.horizon * i / t_ladder;
        for (int j = 0; j < md; ++j)
            x[j] = opts.box_radius *
                   (2.0 * field.uniform(static_cast<std::uint32_t>(i), 5, static_cast<std::uint32_t>(j)) - 1.0);
        std::vector<double> b0(md), s0(sig.size());
        model.drift(t, x, b0);
        model.diffusion(t, x, s0);
        if (t + h <= opts.horizon) {
            model.drift(t + h, x, b);
            model.diffusion(t + h, x, sig);
            double gap = 0.0;
            for (int j = 0; j < md; ++j) gap += std::abs(b[j] - b0[j]);
            for (std::size_t j = 0; j < sig.size(); ++j) gap += std::abs(sig[j] - s0[j]);
            rep.max_right_gap = std::max(rep.max_right_gap, gap);
        }
        if (t - h >= 0.0) {
            model.drift(t - h, x, b);
            model.diffusion(t - h, x, sig);
            double gap = 0.0;
            for (int j = 0; j < md; ++j) gap += std::abs(b[j] - b0[j]);
            for (std::size_t j = 0; j < sig.size(); ++j) gap += std::abs(sig[j] - s0[j]);
            rep.max_left_gap = std::max(rep.max_left_gap, gap);
        }
    }

    rep.h1_pass = rep.max_lipschitz_ratio <= rep.declared_l1 * (1.0 + 1e-9) + 1e-12;
    rep.h2_pass = rep.max_growth_ratio <= rep.declared_l2 * (1.0 + 1e-9) + 1e-12;
    rep.h3_pass = rep.max_right_gap <= opts.right_gap_tolerance;
    return rep;
}

ForwardModel constant_model(double drift, double vol) {
    ForwardModel m;
    m.label = "constant";
    m.drift = [drift](double, std::span<const double>, std::span<double> out) { out[0] = drift; };
    m.diffusion = [vol](double, std::span<const double>, std::span<double> out) { out[0] = vol; };
    m.lipschitz_l1 = 0.0;
    m.growth_l2 = std::max(std::abs(drift) + std::abs(vol), 1e-12);
    return m;
}

ForwardModel linear_drift_model(double a, double vol) {
    ForwardModel m;
    m.label = "linear";
    m.drift = [a](double, std::span<const double> x, std::span<double> out) { out[0] = a * x[0]; };
    m.diffusion = [vol](double, std::span<const double>, std::span<double> out) { out[0] = vol; };
    m.lipschitz_l1 = std::abs(a);
    m.growth_l2 = std::max(std::abs(a), std::abs(vol));
    return m;
}

ForwardModel sin_drift_model() {
    ForwardModel m;
    m.label = "sin";
    m.drift = [](double, std::span<const double> x, std::span<double> out) { out[0] = std::sin(x[0]); };
    m.diffusion = [](double, std::span<const double>, std::span<double> out) { out[0] = 1.0; };
    m.lipschitz_l1 = 1.0;
    m.growth_l2 = 2.0;
    return m;
}

ForwardModel square_drift_model(double declared_l1) {
    ForwardModel m;
    m.label = "square";
    m.drift = [](double, std::span<const double> x, std::span<double> out) { out[0] = x[0] * x[0]; };
    m.diffusion = [](double, std::span<const double>, std::span<double> out) { out[0] = 1.0; };
    m.lipschitz_l1 = declared_l1;
    m.growth_l2 = declared_l1;
    return m;
}

ForwardModel step_vol_model(double jump_time) {
    ForwardModel m;
    m.label = "step_vol";
    m.drift = [](double, std::span<const double>, std::span<double> out) { out[0] = 0.0; };
    m.diffusion = [jump_time](double t, std::span<const double>, std::span<double> out) {
        out[0] = (t >= jump_time) ? 1.0 : 0.0;
    };
    m.lipschitz_l1 = 0.0;
    m.growth_l2 = 1.0;
    return m;
}

} // namespace bsdelab
