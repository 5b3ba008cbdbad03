#include "bsdelab/generator.hpp"

#include <cmath>
#include <stdexcept>

#include "bsdelab/rng.hpp"

namespace bsdelab {

namespace {

double znorm(std::span<const double> z) {
    double s = 0.0;
    for (double v : z) s += v * v;
    return std::sqrt(s);
}

} // namespace

Generator zero_generator() {
    Generator g;
    g.label = "zero";
    g.eval = [](double, double, std::span<const double>) { return 0.0; };
    g.lipschitz_k = 0.0;
    g.flags = {true, true, true, true, true};
    g.linear_form = LinearDriver{0.0, 0.0, 0.0};
    return g;
}

Generator linear_generator(double a, double b, double c) {
    Generator g;
    g.label = "linear(a=" + std::to_string(a) + ",b=" + std::to_string(b) +
              ",c=" + std::to_string(c) + ")";
    g.eval = [a, b, c](double, double y, std::span<const double> z) {
        return a * y + b * z[0] + c;
    };
    g.lipschitz_k = std::max(std::abs(a), std::abs(b));
    g.flags.independent_of_y = (a == 0.0);
    g.flags.positively_homogeneous = (c == 0.0);
    g.flags.subadditive = (c >= 0.0); // g(p1+p2) - g(p1) - g(p2) = -c
    g.flags.convex_in_z = true;       // affine
    g.flags.satisfies_a5 = (a == 0.0 && c == 0.0);
    g.linear_form = LinearDriver{a, b, c};
    return g;
}

Generator kappa_abs_z_generator(double kappa) {
    Generator g;
    g.label = "kappa_abs_z(" + std::to_string(kappa) + ")";
    g.eval = [kappa](double, double, std::span<const double> z) { return kappa * znorm(z); };
    g.lipschitz_k = std::abs(kappa);
    g.flags = {true, true, kappa >= 0.0, kappa >= 0.0, true};
    return g;
}

Generator discount_generator(double beta) {
    Generator g;
    g.label = "discount(" + std::to_string(beta) + ")";
    g.eval = [beta](double, double y, std::span<const double>) { return -beta * y; };
    g.lipschitz_k = std::abs(beta);
    g.flags.independent_of_y = false;
    g.flags.positively_homogeneous = true;
    g.flags.subadditive = true; // additive in y
    g.flags.convex_in_z = true; // linear
    g.flags.satisfies_a5 = (beta == 0.0); // g(t,y,0) = -beta*y
    g.linear_form = LinearDriver{-beta, 0.0, 0.0};
    return g;
}

Generator quadratic_z_generator(double declared_k) {
    Generator g;
    g.label = "quadratic_z";
    g.eval = [](double, double, std::span<const double> z) { return z[0] + 0.1 * z[0] * z[0]; };
    g.lipschitz_k = declared_k;
    g.flags = {true, false, false, true, true};
    return g;
}

Generator time_step_generator(double jump_time) {
    Generator g;
    g.label = "time_step(" + std::to_string(jump_time) + ")";
    g.eval = [jump_time](double t, double, std::span<const double> z) {
        return t >= jump_time ? z[0] : 0.0;
    };
    g.lipschitz_k = 1.0;
    g.flags = {true, true, false, false, true};
    return g;
}

Generator shift_time(const Generator& base, double offset) {
    Generator g = base;
    g.label = base.label + "@+" + std::to_string(offset);
    auto inner = base.eval;
    g.eval = [inner, offset](double t, double y, std::span<const double> z) {
        return inner(offset + t, y, z);
    };
    return g;
}

AAssumptionReport check_a_assumptions(const Generator& g, int probes, std::uint64_t seed,
                                      const AProbeOptions& opts) {
    if (probes < 1) throw std::invalid_argument("check_a_assumptions: probes must be >= 1");

    AAssumptionReport rep;
    rep.declared_k = g.lipschitz_k;
    rep.a3_finite = true;

    const RandomField field(seed, 101);
    const int d = opts.dim;
    std::vector<double> z1(d), z2(d), zy(d, 0.0), zero(d, 0.0);

    for (int i = 0; i < probes; ++i) {
        const auto p = static_cast<std::uint32_t>(i);
        const double t = opts.horizon * field.uniform(p, 0, 0);
        double y1 = opts.y_radius * (2.0 * field.uniform(p, 1, 0) - 1.0);
        double y2 = opts.y_radius * (2.0 * field.uniform(p, 1, 1) - 1.0);
        for (int k = 0; k < d; ++k) {
            z1[k] = opts.z_radius * (2.0 * field.uniform(p, 2, static_cast<std::uint32_t>(k)) - 1.0);
            z2[k] = opts.z_radius * (2.0 * field.uniform(p, 3, static_cast<std::uint32_t>(k)) - 1.0);
        }
        // Alternate pure-y and pure-z perturbations so equality cases of the
        // ratio are attained, not just approached.
        if (i % 3 == 1) y2 = y1;
        if (i % 3 == 2) z2 = z1;

        // A1 ratio over the sampled pair.
        double dz = 0.0;
        for (int k = 0; k < d; ++k) dz += (z1[k] - z2[k]) * (z1[k] - z2[k]);
        const double denom = std::abs(y1 - y2) + std::sqrt(dz);
        if (denom > 1e-12) {
            const double ratio = std::abs(g(t, y1, z1) - g(t, y2, z2)) / denom;
            rep.max_lipschitz_ratio = std::max(rep.max_lipschitz_ratio, ratio);
        }

        // A3 sample along t.
        const double g00 = g(t, 0.0, zero);
        if (!std::isfinite(g00)) rep.a3_finite = false;
        rep.sup_g_at_origin = std::max(rep.sup_g_at_origin, std::abs(g00));

        // A5 witness search.
        const double gy0 = std::abs(g(t, y1, zy));
        if (gy0 > rep.max_abs_g_y0) {
            rep.max_abs_g_y0 = gy0;
            rep.a5_witness_y = y1;
            rep.a5_witness_value = g(t, y1, zy);
        }
    }

    // A4 one-sided gaps on a deterministic time ladder (jump times like k/128
    // are visited exactly), at sampled (y, z).
    const int t_ladder = 128;
    const double h = 1e-7;
    for (int i = 0; i <= t_ladder; ++i) {
        const double t = opts.horizon * i / t_ladder;
        const auto pi = static_cast<std::uint32_t>(i);
        const double y = opts.y_radius * (2.0 * field.uniform(pi, 5, 0) - 1.0);
        for (int k = 0; k < d; ++k)
            z1[k] = opts.z_radius * (2.0 * field.uniform(pi, 6, static_cast<std::uint32_t>(k)) - 1.0);
        const double base = g(t, y, z1);
        if (t + h <= opts.horizon)
            rep.max_right_gap = std::max(rep.max_right_gap, std::abs(g(t + h, y, z1) - base));
        if (t - h >= 0.0)
            rep.max_left_gap = std::max(rep.max_left_gap, std::abs(g(t - h, y, z1) - base));
    }

    rep.a1_pass = rep.max_lipschitz_ratio <= rep.declared_k * (1.0 + 1e-9) + 1e-12;
    rep.a4_pass = rep.max_right_gap <= opts.right_gap_tolerance;
    rep.a5_pass = rep.max_abs_g_y0 <= opts.a5_tolerance;
    return rep;
}

} // namespace bsdelab
