#include "bsdelab/bsde.hpp"

#include <cmath>
#include <stdexcept>

#include "bsdelab/errors.hpp"
#include "bsdelab/parallel.hpp"
#include "bsdelab/stats.hpp"

namespace bsdelab {

double BsdeSolution::y0() const {
    double s = 0.0;
    for (int m = 0; m < paths; ++m) s += y_at(m, 0);
    return paths ? s / paths : 0.0;
}

std::vector<double> BsdeSolution::node_column(int n) const {
    std::vector<double> out(paths);
    for (int m = 0; m < paths; ++m) out[m] = y_at(m, n);
    return out;
}

std::vector<double> BsdeSolution::z_column(int n, int k) const {
    std::vector<double> out(paths);
    for (int m = 0; m < paths; ++m) out[m] = z_at(m, n, k);
    return out;
}

BsdeSolution solve_lsmc(const Generator& g, std::vector<double> terminal_values,
                        const Scenario& scen, const SolveOptions& opts) {
    const TimeGrid& grid = scen.grid();
    const int M = scen.path_count();
    const int d = scen.dim();
    const int T_node = opts.terminal_node < 0 ? grid.steps : opts.terminal_node;
    if (T_node < 1 || T_node > grid.steps)
        throw std::invalid_argument("solve_lsmc: terminal node outside grid");
    if (static_cast<int>(terminal_values.size()) != M)
        throw std::invalid_argument("solve_lsmc: terminal size mismatch");
    const double dt = grid.dt();
    if (g.lipschitz_k * dt >= 1.0)
        throw std::invalid_argument("solve_lsmc: K*dt >= 1, Picard sweep does not contract");
    for (int m = 0; m < M; ++m)
        if (!std::isfinite(terminal_values[m]))
            throw NumericalFailure("solve_lsmc: non-finite terminal value", m, T_node);

    BsdeSolution sol;
    sol.grid = grid;
    sol.dim = d;
    sol.paths = M;
    sol.terminal_node = T_node;
    sol.seed = scen.seed();
    sol.tag = SolverTag::lsmc;
    sol.y.resize(static_cast<std::size_t>(M) * (T_node + 1));
    sol.z.assign(static_cast<std::size_t>(M) * (T_node + 1) * d, 0.0);
    sol.diagnostics.picard_deltas.assign(std::max(opts.picard_iters, 1), 0.0);

    for (int m = 0; m < M; ++m) sol.y[static_cast<std::size_t>(m) * (T_node + 1) + T_node] = terminal_values[m];

    std::vector<double> next(M), target(M), y_reg(M), y_iter(M), z_target(M);
    std::vector<double> zrow(static_cast<std::size_t>(M) * d);

    for (int n = T_node - 1; n >= 0; --n) {
        for (int m = 0; m < M; ++m)
            next[m] = sol.y[static_cast<std::size_t>(m) * (T_node + 1) + n + 1];

        NodeRegression reg(scen, opts.basis, n, opts.jobs);
        y_reg = reg.fit(next, &sol.diagnostics.regression);

        // Centered increment regression for Z (per component).
        for (int k = 0; k < d; ++k) {
            for (int m = 0; m < M; ++m)
                z_target[m] = (next[m] - y_reg[m]) * scen.dw(m, n, k) / dt;
            auto fitted = reg.fit(z_target, nullptr);
            for (int m = 0; m < M; ++m) zrow[static_cast<std::size_t>(m) * d + k] = fitted[m];
        }

        // Picard sweeps for the implicit driver term.
        y_iter = y_reg;
        double prev_delta = 0.0;
        for (int it = 0; it < std::max(opts.picard_iters, 1); ++it) {
            double delta = 0.0;
            for (int m = 0; m < M; ++m) {
                const std::span<const double> zm(zrow.data() + static_cast<std::size_t>(m) * d,
                                                 static_cast<std::size_t>(d));
                const double updated = y_reg[m] + dt * g(grid.node(n), y_iter[m], zm);
                delta = std::max(delta, std::abs(updated - y_iter[m]));
                y_iter[m] = updated;
            }
            sol.diagnostics.picard_deltas[it] = std::max(sol.diagnostics.picard_deltas[it], delta);
            if (it == 0) sol.diagnostics.picard_first_delta =
                std::max(sol.diagnostics.picard_first_delta, delta);
            prev_delta = delta;
        }
        sol.diagnostics.picard_last_delta =
            std::max(sol.diagnostics.picard_last_delta, prev_delta);

        for (int m = 0; m < M; ++m) {
            if (!std::isfinite(y_iter[m]))
                throw NumericalFailure("solve_lsmc: non-finite Y", m, n);
            sol.y[static_cast<std::size_t>(m) * (T_node + 1) + n] = y_iter[m];
            for (int k = 0; k < d; ++k)
                sol.z[(static_cast<std::size_t>(m) * (T_node + 1) + n) * d + k] =
                    zrow[static_cast<std::size_t>(m) * d + k];
        }
    }

    // Terminal-node Z replays the last regression step (diagnostic only).
    if (T_node >= 1) {
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < d; ++k)
                sol.z[(static_cast<std::size_t>(m) * (T_node + 1) + T_node) * d + k] =
                    sol.z[(static_cast<std::size_t>(m) * (T_node + 1) + T_node - 1) * d + k];
    }

    if (scen.has_enlargement()) {
        const auto& enl = scen.enlargement();
        sol.y0_atoms.assign(enl.atom_count(), 0.0);
        sol.y0_atom_probs = enl.probabilities;
        std::vector<int> counts(enl.atom_count(), 0);
        for (int m = 0; m < M; ++m) {
            sol.y0_atoms[enl.atom_index[m]] += sol.y_at(m, 0);
            ++counts[enl.atom_index[m]];
        }
        for (int j = 0; j < enl.atom_count(); ++j)
            if (counts[j] > 0) sol.y0_atoms[j] /= counts[j];
    }
    return sol;
}

BsdeSolution solve_lsmc(const Generator& g, const TerminalCondition& xi,
                        const Scenario& scen, const SolveOptions& opts) {
    const int T_node = opts.terminal_node < 0 ? scen.grid().steps : opts.terminal_node;
    std::vector<double> values(scen.path_count());
    for (int m = 0; m < scen.path_count(); ++m) values[m] = xi.eval(scen.view(m));
    (void)T_node;
    return solve_lsmc(g, std::move(values), scen, opts);
}

DualTestProcess make_dual_test(const Scenario& scen, int start_node, int end_node,
                               const std::function<double(const PathView&, int)>& u_fn,
                               const std::function<double(const PathView&, int, int)>& v_fn,
                               const std::function<double(const PathView&)>& eta_fn,
                               std::string label) {
    const int M = scen.path_count();
    const int N = scen.grid().steps;
    const int d = scen.dim();
    DualTestProcess p;
    p.label = std::move(label);
    p.start_node = start_node;
    p.end_node = end_node;
    p.eta.resize(M);
    p.u.assign(static_cast<std::size_t>(M) * N, 0.0);
    p.v.assign(static_cast<std::size_t>(M) * N * d, 0.0);
    for (int m = 0; m < M; ++m) {
        const PathView view = scen.view(m);
        p.eta[m] = eta_fn(view);
        for (int n = start_node; n < end_node; ++n) {
            p.u[static_cast<std::size_t>(m) * N + n] = u_fn(view, n);
            for (int k = 0; k < d; ++k)
                p.v[(static_cast<std::size_t>(m) * N + n) * d + k] = v_fn(view, n, k);
        }
    }
    return p;
}

std::vector<TranspositionResidual> transposition_residual(
    const BsdeSolution& sol, const Generator& g, const Scenario& scen,
    const std::vector<DualTestProcess>& tests) {
    const TimeGrid& grid = sol.grid;
    const int M = sol.paths;
    const int N = grid.steps;
    const int d = sol.dim;
    const double dt = grid.dt();

    std::vector<TranspositionResidual> out;
    out.reserve(tests.size());
    for (const auto& test : tests) {
        const int s = test.start_node;
        const int t = test.end_node;
        if (s < 0 || t > sol.terminal_node || s > t)
            throw std::invalid_argument("transposition_residual: bad [s, t] interval");

        std::vector<double> lhs(M), rhs(M), diff(M);
        for (int m = 0; m < M; ++m) {
            double x = test.eta[m];
            double acc_xg = 0.0, acc_uy = 0.0, acc_vz = 0.0;
            for (int n = s; n < t; ++n) {
                const std::span<const double> zm(
                    sol.z.data() + (static_cast<std::size_t>(m) * (sol.terminal_node + 1) + n) * d,
                    static_cast<std::size_t>(d));
                acc_xg += x * g(grid.node(n), sol.y_at(m, n), zm) * dt;
                const double u = test.u[static_cast<std::size_t>(m) * N + n];
                acc_uy += u * 0.5 * (sol.y_at(m, n) + sol.y_at(m, n + 1)) * dt;
                double dx = u * dt;
                for (int k = 0; k < d; ++k) {
                    const double v = test.v[(static_cast<std::size_t>(m) * N + n) * d + k];
                    acc_vz += v * sol.z_at(m, n, k) * dt;
                    dx += v * scen.dw(m, n, k);
                }
                x += dx;
            }
            lhs[m] = sol.y_at(m, t) * x + acc_xg;
            rhs[m] = sol.y_at(m, s) * test.eta[m] + acc_uy + acc_vz;
            diff[m] = lhs[m] - rhs[m];
        }
        TranspositionResidual r;
        r.label = test.label;
        r.lhs = mean(lhs);
        r.rhs = mean(rhs);
        r.residual = std::abs(mean(diff));
        r.standard_error = standard_error(diff);
        r.scale = std::max({1.0, std::abs(r.lhs), std::abs(r.rhs)});
        out.push_back(r);
    }
    return out;
}

AprioriEstimate apriori_estimate_audit(const BsdeSolution& sol, const Generator& g,
                                       std::span<const double> terminal_values) {
    const int M = sol.paths;
    const int d = sol.dim;
    const double dt = sol.grid.dt();
    std::vector<double> zero(d, 0.0);

    double sum_sol = 0.0, sum_term = 0.0;
    double driver_l1 = 0.0;
    for (int n = 0; n < sol.terminal_node; ++n)
        driver_l1 += std::abs(g(sol.grid.node(n), 0.0, zero)) * dt;
    for (int m = 0; m < M; ++m) {
        double sup_y = 0.0, z_sq = 0.0;
        for (int n = 0; n <= sol.terminal_node; ++n) {
            sup_y = std::max(sup_y, sol.y_at(m, n) * sol.y_at(m, n));
            if (n < sol.terminal_node)
                for (int k = 0; k < d; ++k) z_sq += sol.z_at(m, n, k) * sol.z_at(m, n, k) * dt;
        }
        sum_sol += sup_y + z_sq;
        sum_term += terminal_values[m] * terminal_values[m];
    }

    AprioriEstimate est;
    est.solution_norm = std::sqrt(sum_sol / M);
    est.driver_norm = driver_l1; // deterministic driver at the origin
    est.terminal_norm = std::sqrt(sum_term / M);
    const double denom = est.driver_norm + est.terminal_norm;
    est.ratio = denom > 0.0 ? est.solution_norm / denom : 0.0;
    return est;
}

} // namespace bsdelab
