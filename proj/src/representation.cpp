#include "bsdelab/representation.hpp"

#include <cmath>
#include <stdexcept>

#include "bsdelab/rng.hpp"
#include "bsdelab/stats.hpp"

namespace bsdelab {

namespace {

void validate_probe_alignment(double t, const std::vector<double>& epsilons,
                              const RepresentationConfig& cfg) {
    const double dt = cfg.base_grid.dt();
    const double T = cfg.base_grid.horizon;
    if (t < 0.0 || t >= T)
        throw std::invalid_argument("representation probe: t outside [0, T)");
    if (std::abs(t / dt - std::round(t / dt)) > 1e-9)
        throw std::invalid_argument("representation probe: t not aligned to the base grid");
    if (epsilons.empty())
        throw std::invalid_argument("representation probe: empty epsilon ladder");
    double prev = 2.0 * T;
    for (double eps : epsilons) {
        if (!(eps > 0.0) || eps >= prev)
            throw std::invalid_argument("representation probe: epsilons must decrease to 0");
        const double k = eps / dt;
        if (k < 1.0 - 1e-9 || std::abs(k - std::round(k)) > 1e-9)
            throw std::invalid_argument(
                "representation probe: epsilon below grid resolution or misaligned");
        if (t + eps > T + 1e-12)
            throw std::invalid_argument("representation probe: t + epsilon exceeds the horizon");
        prev = eps;
    }
}

RepresentationRow lsmc_quotient(const Generator& g_abs, double probe_t, double y_level,
                                double eps, const RepresentationConfig& cfg,
                                const std::function<double(const PathView&)>& terminal_fn,
                                const std::function<double(const PathView&)>& control_fn,
                                double target, const ForwardModel* model,
                                std::span<const double> start) {
    const TimeGrid sub_grid{eps, cfg.substeps};
    BrownianPaths paths = simulate_brownian(sub_grid, model ? model->noise_dim : 1,
                                            cfg.paths, cfg.seed, cfg.jobs);
    std::optional<ForwardPaths> fwd;
    if (model) fwd = euler_maruyama(*model, paths, 0, start, cfg.jobs);
    const Scenario scen(std::move(paths), std::nullopt, std::move(fwd), cfg.jobs);

    const Generator g_sub = shift_time(g_abs, probe_t);
    std::vector<double> terminal(cfg.paths), control(cfg.paths);
    for (int m = 0; m < cfg.paths; ++m) {
        const PathView v = scen.view(m);
        terminal[m] = terminal_fn(v);
        control[m] = control_fn(v);
    }

    SolveOptions opts;
    opts.picard_iters = cfg.picard_iters;
    opts.jobs = cfg.jobs;
    const BsdeSolution sol = solve_lsmc(g_sub, terminal, scen, opts);

    // The control variate (exact mean zero) removes the terminal's martingale
    // noise from the estimate. Its sample mean shifts every path equally, so
    // the regression's mean preservation keeps the estimator unbiased.
    const double cv_mean = mean(control);

    // Per-path quotient from the node-0 solution values (constant within a
    // stratum: node-0 features are degenerate, matching the F_t-measurable
    // restarted value). The pathwise driver accumulation equals the node-0
    // mean exactly and carries the sampling spread for the standard error.
    const double dt = sub_grid.dt();
    std::vector<double> quotient(cfg.paths), pathwise(cfg.paths);
    for (int m = 0; m < cfg.paths; ++m) {
        quotient[m] = (sol.y_at(m, 0) - cv_mean - y_level) / eps;
        double acc = terminal[m] - control[m];
        for (int n = 0; n < cfg.substeps; ++n) {
            const std::span<const double> zm(
                sol.z.data() + (static_cast<std::size_t>(m) * (cfg.substeps + 1) + n) * sol.dim,
                static_cast<std::size_t>(sol.dim));
            acc += g_sub(sub_grid.node(n), sol.y_at(m, n), zm) * dt;
        }
        pathwise[m] = (acc - y_level) / eps;
    }
    RepresentationRow row;
    row.eps = eps;
    row.estimate = mean(quotient);
    double sq = 0.0;
    for (double q : quotient) sq += (q - target) * (q - target);
    row.l2_error = std::sqrt(sq / cfg.paths);
    row.std_error = standard_error(pathwise);
    return row;
}

} // namespace

bool RepresentationReport::errors_non_increasing() const {
    int inversions = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double slack = std::max(rows[i - 1].std_error, rows[i].std_error);
        if (rows[i].l2_error > rows[i - 1].l2_error + slack) ++inversions;
    }
    return inversions <= 1;
}

RepresentationReport difference_quotient_brownian(const Generator& g,
                                                  const RepresentationProbe& probe,
                                                  const RepresentationConfig& cfg) {
    if (probe.z.empty())
        throw std::invalid_argument("difference_quotient_brownian: probe.z required");
    validate_probe_alignment(probe.t, probe.epsilons, cfg);

    RepresentationReport rep;
    rep.target = g(probe.t, probe.y, probe.z);

    const bool analytic = (cfg.subsolver == SubSolver::analytic) ||
                          (cfg.subsolver == SubSolver::automatic && g.linear_form.has_value() &&
                           probe.z.size() == 1);
    if (analytic && !g.linear_form.has_value())
        throw std::invalid_argument("difference_quotient_brownian: no analytic form for " + g.label);

    for (double eps : probe.epsilons) {
        if (analytic) {
            const auto lf = *g.linear_form;
            const AffineTerminal xi{probe.z[0], probe.y};
            const double y0 = closed_form_linear_root(lf.a, lf.b, lf.c, xi, eps);
            RepresentationRow row;
            row.eps = eps;
            row.estimate = (y0 - probe.y) / eps;
            row.l2_error = std::abs(row.estimate - rep.target);
            row.std_error = 0.0;
            rep.rows.push_back(row);
            continue;
        }
        const auto z = probe.z;
        const double y_level = probe.y;
        rep.rows.push_back(lsmc_quotient(
            g, probe.t, y_level, eps, cfg,
            [&z, y_level](const PathView& v) {
                double acc = y_level;
                for (std::size_t k = 0; k < z.size(); ++k)
                    acc += z[k] * v.w(v.grid->steps, static_cast<int>(k));
                return acc;
            },
            [&z](const PathView& v) {
                double acc = 0.0;
                for (std::size_t k = 0; k < z.size(); ++k)
                    acc += z[k] * v.w(v.grid->steps, static_cast<int>(k));
                return acc;
            },
            rep.target, nullptr, {}));
    }
    return rep;
}

RepresentationReport difference_quotient_forward(const Generator& g, const ForwardModel& model,
                                                 const RepresentationProbe& probe,
                                                 const RepresentationConfig& cfg) {
    if (probe.x.size() != static_cast<std::size_t>(model.state_dim) ||
        probe.p.size() != static_cast<std::size_t>(model.state_dim))
        throw std::invalid_argument("difference_quotient_forward: probe (x, p) dimension mismatch");
    validate_probe_alignment(probe.t, probe.epsilons, cfg);

    const int md = model.state_dim;
    const int nd = model.noise_dim;
    std::vector<double> b(md), sigma(static_cast<std::size_t>(md) * nd);
    model.drift(probe.t, probe.x, b);
    model.diffusion(probe.t, probe.x, sigma);

    // sigma^*(t,x) p and p.b(t,x).
    std::vector<double> sigma_t_p(nd, 0.0);
    for (int k = 0; k < nd; ++k)
        for (int j = 0; j < md; ++j)
            sigma_t_p[k] += sigma[static_cast<std::size_t>(j) * nd + k] * probe.p[j];
    double p_dot_b = 0.0;
    for (int j = 0; j < md; ++j) p_dot_b += probe.p[j] * b[j];

    RepresentationReport rep;
    rep.target = g(probe.t, probe.y, sigma_t_p) + p_dot_b;

    // Coefficients run at absolute time t + s on the sub-interval.
    ForwardModel shifted = model;
    const double offset = probe.t;
    auto drift0 = model.drift;
    auto diff0 = model.diffusion;
    shifted.drift = [drift0, offset](double s, std::span<const double> x, std::span<double> out) {
        drift0(offset + s, x, out);
    };
    shifted.diffusion = [diff0, offset](double s, std::span<const double> x, std::span<double> out) {
        diff0(offset + s, x, out);
    };

    const auto p_dir = probe.p;
    const auto x0 = probe.x;
    const double y_level = probe.y;
    for (double eps : probe.epsilons) {
        rep.rows.push_back(lsmc_quotient(
            g, probe.t, y_level, eps, cfg,
            [&p_dir, &x0, y_level](const PathView& v) {
                double acc = y_level;
                for (std::size_t j = 0; j < p_dir.size(); ++j)
                    acc += p_dir[j] * (v.x(v.grid->steps, static_cast<int>(j)) - x0[j]);
                return acc;
            },
            [&sigma_t_p](const PathView& v) {
                double acc = 0.0;
                for (std::size_t k = 0; k < sigma_t_p.size(); ++k)
                    acc += sigma_t_p[k] * v.w(v.grid->steps, static_cast<int>(k));
                return acc;
            },
            rep.target, &shifted, x0));
    }
    return rep;
}

ConverseComparisonReport converse_comparison(const Generator& g1, const Generator& g2,
                                             const std::vector<TerminalCondition>& family,
                                             const Scenario& scen,
                                             const ConverseComparisonConfig& cfg) {
    ConverseComparisonReport rep;
    const int N = scen.grid().steps;
    const int M = scen.path_count();
    const std::vector<int> sample_nodes = {0, N / 4, N / 2, (3 * N) / 4};

    // Step 1: hypothesis Y(g1) <= Y(g2) across the terminal family.
    rep.hypothesis_holds = true;
    for (const auto& xi : family) {
        const auto sol1 = solve_lsmc(g1, xi, scen, cfg.solve);
        const auto sol2 = solve_lsmc(g2, xi, scen, cfg.solve);
        ExpectationComparisonRow row;
        row.terminal = xi.label;
        row.min_mean_gap = 1e300;
        for (int n : sample_nodes) {
            std::vector<double> gap(M);
            for (int m = 0; m < M; ++m) gap[m] = sol2.y_at(m, n) - sol1.y_at(m, n);
            row.min_mean_gap = std::min(row.min_mean_gap, mean(gap));
            row.max_se = std::max(row.max_se, standard_error(gap));
        }
        row.ordered = row.min_mean_gap >= -std::max(3.0 * row.max_se, 1e-12);
        if (!row.ordered) rep.hypothesis_holds = false;
        rep.solution_rows.push_back(row);
    }

    // Step 2: quotient comparison at every probe point, smallest epsilon,
    // shared seed so both drivers see identical sub-paths.
    RepresentationConfig rcfg = cfg.rep;
    const double T = rcfg.base_grid.horizon;
    for (int i = 0; i < cfg.probe_time_count; ++i) {
        const double t = T * static_cast<double>(i) / cfg.probe_time_count;
        if (t + cfg.probe_eps > T + 1e-12) continue;
        for (double y : cfg.probe_levels_y) {
            for (double z : cfg.probe_levels_z) {
                RepresentationProbe probe;
                probe.t = t;
                probe.y = y;
                probe.z = {z};
                probe.epsilons = {cfg.probe_eps};
                const auto r1 = difference_quotient_brownian(g1, probe, rcfg);
                const auto r2 = difference_quotient_brownian(g2, probe, rcfg);
                ProbePointResult pr;
                pr.t = t;
                pr.y = y;
                pr.z = z;
                pr.d1 = r1.rows[0].estimate;
                pr.d2 = r2.rows[0].estimate;
                pr.se = r1.rows[0].std_error + r2.rows[0].std_error;
                pr.dominance_ok = pr.d1 <= pr.d2 + std::max(3.0 * pr.se, cfg.tolerance_floor);
                rep.probes.push_back(pr);
                if (!pr.dominance_ok) rep.counterexamples.push_back(pr);
            }
        }
    }
    rep.dominance = rep.counterexamples.empty();
    return rep;
}

namespace {

struct GeneratorProbeResult {
    double worst = 0.0; // worst violation (0 when the property holds exactly)
    bool holds = true;
};

GeneratorProbeResult probe_generator_property(const Generator& g, GeneratorProperty property,
                                              const CharacterizationConfig& cfg,
                                              double horizon) {
    const RandomField field(cfg.probe_seed, 102);
    GeneratorProbeResult res;
    const double tol = 1e-9;
    for (int i = 0; i < cfg.probes; ++i) {
        const auto pi = static_cast<std::uint32_t>(i);
        const double t = horizon * field.uniform(pi, 0, 0);
        const double y1 = cfg.y_radius * (2.0 * field.uniform(pi, 1, 0) - 1.0);
        const double y2 = cfg.y_radius * (2.0 * field.uniform(pi, 1, 1) - 1.0);
        const double z1 = cfg.z_radius * (2.0 * field.uniform(pi, 2, 0) - 1.0);
        const double z2 = cfg.z_radius * (2.0 * field.uniform(pi, 2, 1) - 1.0);
        double violation = 0.0;
        switch (property) {
            case GeneratorProperty::positive_homogeneity: {
                const double alpha = 3.0 * field.uniform(pi, 3, 0);
                violation = std::abs(g(t, alpha * y1, alpha * z1) - alpha * g(t, y1, z1));
                break;
            }
            case GeneratorProperty::translation_invariance:
                violation = std::abs(g(t, y1, z1) - g(t, y2, z1));
                break;
            case GeneratorProperty::subadditivity:
                violation = g(t, y1 + y2, z1 + z2) - g(t, y1, z1) - g(t, y2, z2);
                break;
            case GeneratorProperty::convexity: {
                const double alpha = field.uniform(pi, 3, 1);
                violation = g(t, alpha * y1 + (1 - alpha) * y2, alpha * z1 + (1 - alpha) * z2) -
                            alpha * g(t, y1, z1) - (1 - alpha) * g(t, y2, z2);
                break;
            }
        }
        res.worst = std::max(res.worst, violation);
        if (violation > tol) res.holds = false;
    }
    return res;
}

std::vector<int> sampled_nodes(int N, int from = 0) {
    std::vector<int> nodes;
    for (int n : {0, N / 4, N / 2, (3 * N) / 4, N})
        if (n >= from) nodes.push_back(n);
    return nodes;
}

} // namespace

const char* property_name(GeneratorProperty p) {
    switch (p) {
        case GeneratorProperty::positive_homogeneity: return "positive_homogeneity";
        case GeneratorProperty::translation_invariance: return "translation_invariance";
        case GeneratorProperty::subadditivity: return "subadditivity";
        case GeneratorProperty::convexity: return "convexity";
    }
    return "?";
}

CharacterizationReport characterization_suite(const Generator& g, GeneratorProperty property,
                                              CharacterizationDirection direction,
                                              const Scenario& scen,
                                              const CharacterizationConfig& cfg) {
    CharacterizationReport rep;
    rep.property = property;
    rep.direction = direction;
    const int N = scen.grid().steps;
    const int M = scen.path_count();
    const double tol = cfg.tol();

    switch (property) {
        case GeneratorProperty::positive_homogeneity: {
            double worst = 0.0;
            for (const auto& xi : {terminal_w(), terminal_cos_w()}) {
                const auto base = solve_lsmc(g, xi, scen, cfg.solve);
                for (double alpha : cfg.alphas) {
                    const auto scaled = solve_lsmc(g, scale_terminal(alpha, xi), scen, cfg.solve);
                    for (int n : sampled_nodes(N)) {
                        std::vector<double> a(M), b(M);
                        for (int m = 0; m < M; ++m) {
                            a[m] = scaled.y_at(m, n);
                            b[m] = alpha * base.y_at(m, n);
                        }
                        worst = std::max(worst, rmse(a, b) / (1.0 + std::abs(alpha)));
                    }
                }
            }
            rep.solution_residual = worst;
            rep.solution_level_holds = worst <= tol;
            break;
        }
        case GeneratorProperty::translation_invariance: {
            double worst = 0.0;
            std::string worst_case;
            // Constant shift on a constant terminal: the cleanest witness when
            // the driver depends on y.
            {
                const auto sol0 = solve_lsmc(g, terminal_constant(0.0), scen, cfg.solve);
                const auto sol1 = solve_lsmc(g, terminal_constant(1.0), scen, cfg.solve);
                const double gap = std::abs(sol1.y0() - (sol0.y0() + 1.0));
                if (gap > worst) {
                    worst = gap;
                    worst_case = "xi=0, beta=1: gap " + std::to_string(gap);
                }
            }
            // Constant shift of W_T.
            {
                const auto base = solve_lsmc(g, terminal_w(), scen, cfg.solve);
                const auto shifted = solve_lsmc(g, shift_terminal(terminal_w(), 1.0), scen, cfg.solve);
                for (int n : sampled_nodes(N)) {
                    std::vector<double> a(M), b(M);
                    for (int m = 0; m < M; ++m) {
                        a[m] = shifted.y_at(m, n);
                        b[m] = base.y_at(m, n) + 1.0;
                    }
                    const double r = rmse(a, b);
                    if (r > worst) {
                        worst = r;
                        worst_case = "xi=W_T, beta=1";
                    }
                }
            }
            // F_t-measurable shift beta = W_{t_k}; identity required for s >= t_k.
            {
                const int k = N / 2;
                SolveOptions o = cfg.solve;
                o.basis.extras.push_back(
                    {"w_mid", k, [k](const PathView& v, int) { return v.w(k); }});
                const auto base = solve_lsmc(g, terminal_w(), scen, o);
                const auto shifted =
                    solve_lsmc(g, add_terminals(terminal_w(), terminal_w_at(k)), scen, o);
                for (int n : sampled_nodes(N, k)) {
                    std::vector<double> a(M), b(M);
                    for (int m = 0; m < M; ++m) {
                        a[m] = shifted.y_at(m, n);
                        b[m] = base.y_at(m, n) + scen.view(m).w(k);
                    }
                    const double r = rmse(a, b);
                    if (r > worst) {
                        worst = r;
                        worst_case = "xi=W_T, beta=W_mid";
                    }
                }
            }
            rep.solution_residual = worst;
            rep.solution_level_holds = worst <= tol;
            rep.detail = worst_case;
            break;
        }
        case GeneratorProperty::subadditivity: {
            double worst = -1e300;
            const std::vector<std::pair<TerminalCondition, TerminalCondition>> pairs = {
                {terminal_w(), terminal_scaled_w(-1.0)},
                {terminal_w(), scale_terminal(0.5, terminal_w_squared())},
            };
            for (const auto& [xi1, xi2] : pairs) {
                const auto s1 = solve_lsmc(g, xi1, scen, cfg.solve);
                const auto s2 = solve_lsmc(g, xi2, scen, cfg.solve);
                const auto s12 = solve_lsmc(g, add_terminals(xi1, xi2), scen, cfg.solve);
                for (int n : sampled_nodes(N)) {
                    std::vector<double> gap(M);
                    for (int m = 0; m < M; ++m)
                        gap[m] = s12.y_at(m, n) - s1.y_at(m, n) - s2.y_at(m, n);
                    const double violation = mean(gap) - 3.0 * standard_error(gap);
                    worst = std::max(worst, violation);
                }
            }
            rep.solution_residual = worst;
            rep.solution_level_holds = worst <= tol;
            break;
        }
        case GeneratorProperty::convexity: {
            double worst = -1e300;
            const auto xi1 = terminal_w();
            const auto xi2 = scale_terminal(0.5, terminal_w_squared());
            const auto s1 = solve_lsmc(g, xi1, scen, cfg.solve);
            const auto s2 = solve_lsmc(g, xi2, scen, cfg.solve);
            for (double alpha : cfg.convex_alphas) {
                const auto mix = solve_lsmc(
                    g, add_terminals(scale_terminal(alpha, xi1), scale_terminal(1.0 - alpha, xi2)),
                    scen, cfg.solve);
                for (int n : sampled_nodes(N)) {
                    std::vector<double> gap(M);
                    for (int m = 0; m < M; ++m)
                        gap[m] = mix.y_at(m, n) - alpha * s1.y_at(m, n) -
                                 (1.0 - alpha) * s2.y_at(m, n);
                    worst = std::max(worst, mean(gap) - 3.0 * standard_error(gap));
                }
            }
            rep.solution_residual = worst;
            rep.solution_level_holds = worst <= tol;
            break;
        }
    }

    const auto probe = probe_generator_property(g, property, cfg, scen.grid().horizon);
    rep.generator_level_holds = probe.holds;
    rep.generator_violation = probe.worst;
    rep.consistent = (rep.solution_level_holds == rep.generator_level_holds);
    return rep;
}

std::vector<EquivalenceRow> axiom_equivalence_suite(const Generator& g, const Scenario& scen,
                                                    const CharacterizationConfig& cfg) {
    {
        AProbeOptions opts;
        opts.horizon = scen.grid().horizon;
        const auto audit = check_a_assumptions(g, 4096, 99, opts);
        if (!audit.pass_a1_a5())
            throw std::invalid_argument("axiom_equivalence_suite: A1/A5 audit failed for " + g.label);
    }

    std::vector<EquivalenceRow> rows;
    const int N = scen.grid().steps;
    const int M = scen.path_count();
    const int mid = N / 2;
    const double tol = cfg.tol();

    const auto conditional_rmse = [&](const BsdeSolution& a, const BsdeSolution& b,
                                      double scale_b, double offset) {
        std::vector<double> va(M), vb(M);
        for (int m = 0; m < M; ++m) {
            va[m] = a.y_at(m, mid);
            vb[m] = scale_b * b.y_at(m, mid) + offset;
        }
        return rmse(va, vb);
    };

    for (GeneratorProperty property :
         {GeneratorProperty::positive_homogeneity, GeneratorProperty::translation_invariance,
          GeneratorProperty::subadditivity, GeneratorProperty::convexity}) {
        EquivalenceRow row;
        row.property = property;
        row.id = std::string("representation.equivalence.") + property_name(property);

        switch (property) {
            case GeneratorProperty::positive_homogeneity: {
                const auto base = solve_lsmc(g, terminal_w(), scen, cfg.solve);
                double worst = 0.0, worst_cond = 0.0;
                for (double alpha : cfg.alphas) {
                    const auto scaled =
                        solve_lsmc(g, terminal_scaled_w(alpha), scen, cfg.solve);
                    worst = std::max(worst, std::abs(scaled.y0() - alpha * base.y0()) /
                                                (1.0 + std::abs(alpha)));
                    worst_cond = std::max(worst_cond, conditional_rmse(scaled, base, alpha, 0.0) /
                                                          (1.0 + std::abs(alpha)));
                }
                row.expectation_level = worst <= tol;
                row.conditional_level = worst_cond <= tol;
                row.worst_residual = std::max(worst, worst_cond);
                break;
            }
            case GeneratorProperty::translation_invariance: {
                const auto base = solve_lsmc(g, terminal_w(), scen, cfg.solve);
                const auto shifted =
                    solve_lsmc(g, shift_terminal(terminal_w(), 1.5), scen, cfg.solve);
                const double e_gap = std::abs(shifted.y0() - base.y0() - 1.5);
                const double c_gap = conditional_rmse(shifted, base, 1.0, 1.5);
                row.expectation_level = e_gap <= tol;
                row.conditional_level = c_gap <= tol;
                row.worst_residual = std::max(e_gap, c_gap);
                break;
            }
            case GeneratorProperty::subadditivity: {
                const auto xi1 = terminal_w();
                const auto xi2 = terminal_scaled_w(-1.0);
                const auto s1 = solve_lsmc(g, xi1, scen, cfg.solve);
                const auto s2 = solve_lsmc(g, xi2, scen, cfg.solve);
                const auto s12 = solve_lsmc(g, add_terminals(xi1, xi2), scen, cfg.solve);
                const double e_violation = s12.y0() - s1.y0() - s2.y0();
                std::vector<double> gap(M);
                for (int m = 0; m < M; ++m)
                    gap[m] = s12.y_at(m, mid) - s1.y_at(m, mid) - s2.y_at(m, mid);
                const double c_violation = mean(gap) - 3.0 * standard_error(gap);
                row.expectation_level = e_violation <= tol;
                row.conditional_level = c_violation <= tol;
                row.worst_residual = std::max(e_violation, c_violation);
                break;
            }
            case GeneratorProperty::convexity: {
                const auto xi1 = terminal_w();
                const auto xi2 = scale_terminal(0.5, terminal_w_squared());
                const auto s1 = solve_lsmc(g, xi1, scen, cfg.solve);
                const auto s2 = solve_lsmc(g, xi2, scen, cfg.solve);
                const double alpha = 0.5;
                const auto mix = solve_lsmc(
                    g, add_terminals(scale_terminal(alpha, xi1), scale_terminal(1 - alpha, xi2)),
                    scen, cfg.solve);
                const double e_violation =
                    mix.y0() - alpha * s1.y0() - (1 - alpha) * s2.y0();
                std::vector<double> gap(M);
                for (int m = 0; m < M; ++m)
                    gap[m] = mix.y_at(m, mid) - alpha * s1.y_at(m, mid) -
                             (1 - alpha) * s2.y_at(m, mid);
                const double c_violation = mean(gap) - 3.0 * standard_error(gap);
                row.expectation_level = e_violation <= tol;
                row.conditional_level = c_violation <= tol;
                row.worst_residual = std::max(e_violation, c_violation);
                break;
            }
        }

        // Driver level: translation <-> independence of y; sub-additivity and
        // convexity additionally require independence of y.
        const auto main_probe = probe_generator_property(g, property, cfg, scen.grid().horizon);
        bool driver_holds = main_probe.holds;
        if (property == GeneratorProperty::subadditivity ||
            property == GeneratorProperty::convexity) {
            driver_holds = driver_holds &&
                           probe_generator_property(g, GeneratorProperty::translation_invariance,
                                                    cfg, scen.grid().horizon)
                               .holds;
        }
        row.generator_level = driver_holds;
        row.consistent = (row.expectation_level == row.conditional_level) &&
                         (row.conditional_level == row.generator_level);
        rows.push_back(row);
    }
    return rows;
}

} // namespace bsdelab
