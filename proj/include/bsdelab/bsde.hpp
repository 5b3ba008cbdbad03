#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsdelab/generator.hpp"
#include "bsdelab/regression.hpp"
#include "bsdelab/scenario.hpp"
#include "bsdelab/terminal.hpp"

namespace bsdelab {

enum class SolverTag { lsmc, tree, closed_form };

struct SolverDiagnostics {
    RegressionDiagnostics regression;
    // Sup-norm deltas of the first and last Picard sweep, maximized over nodes.
    double picard_first_delta = 0.0;
    double picard_last_delta = 0.0;
    std::vector<double> picard_deltas; // per sweep, maximized over nodes
};

// Path-indexed backward solution. Y[.][terminal_node] equals the terminal
// payoff bitwise; Z at the terminal node replays the last regression step and
// is diagnostic only.
struct BsdeSolution {
    TimeGrid grid;
    int dim = 1;
    int paths = 0;
    int terminal_node = 0;
    std::uint64_t seed = 0;
    SolverTag tag = SolverTag::lsmc;
    std::vector<double> y; // [m*(terminal_node+1) + n]
    std::vector<double> z; // [(m*(terminal_node+1) + n)*dim + k]
    SolverDiagnostics diagnostics;
    std::vector<double> y0_atoms;      // per enlargement atom (empty otherwise)
    std::vector<double> y0_atom_probs;

    double y_at(int m, int n) const {
        return y[static_cast<std::size_t>(m) * (terminal_node + 1) + n];
    }
    double z_at(int m, int n, int k = 0) const {
        return z[(static_cast<std::size_t>(m) * (terminal_node + 1) + n) * dim + k];
    }
    // Cross-path mean of Y at node 0 (the value itself when the filtration at 0
    // is trivial; per-atom values live in y0_atoms under enlargement).
    double y0() const;
    std::vector<double> node_column(int n) const;  // Y[.][n]
    std::vector<double> z_column(int n, int k = 0) const;
};

struct SolveOptions {
    RegressionBasis basis = RegressionBasis::polynomial(2);
    int picard_iters = 3;
    int terminal_node = -1; // default: grid.steps
    int jobs = 1;
};

// Backward least-squares Monte Carlo: implicit in Y via Picard sweeps,
// explicit in Z via the centered increment regression
//   Z_n = Regress((Y_{n+1} - Regress(Y_{n+1}))*dW_n) / dt.
BsdeSolution solve_lsmc(const Generator& g, std::vector<double> terminal_values,
                        const Scenario& scen, const SolveOptions& opts = {});
BsdeSolution solve_lsmc(const Generator& g, const TerminalCondition& xi,
                        const Scenario& scen, const SolveOptions& opts = {});

// Adapted step test process (u, v) with starting value eta at start_node; its
// induced process X follows the same Euler rule as the forward module with
// b -> u, sigma -> v.
struct DualTestProcess {
    std::string label;
    int start_node = 0;
    int end_node = 0;
    std::vector<double> eta; // per path
    std::vector<double> u;   // [m*N + n], used for n in [start, end)
    std::vector<double> v;   // [(m*N + n)*dim + k]
};

DualTestProcess make_dual_test(const Scenario& scen, int start_node, int end_node,
                               const std::function<double(const PathView&, int)>& u_fn,
                               const std::function<double(const PathView&, int, int)>& v_fn,
                               const std::function<double(const PathView&)>& eta_fn,
                               std::string label = "dual");

struct TranspositionResidual {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double standard_error = 0.0; // of the per-path LHS-RHS difference mean
    double scale = 1.0;          // max(1, |lhs|, |rhs|)
};

// Duality identity residual on [s, t]:
//   E[Y_t X_t + sum X g dt] vs E[Y_s eta + sum u Y dt + sum v Z dt].
// X*g uses left-endpoint sums (g at the terminal node is undefined);
// u*Y uses the trapezoidal rule; v*Z left-endpoint.
std::vector<TranspositionResidual> transposition_residual(
    const BsdeSolution& sol, const Generator& g, const Scenario& scen,
    const std::vector<DualTestProcess>& tests);

struct AprioriEstimate {
    double solution_norm = 0.0;  // sqrt(E[sup_n Y^2 + sum |Z|^2 dt])
    double driver_norm = 0.0;    // sqrt(E[(sum |g(t,0,0)| dt)^2])
    double terminal_norm = 0.0;  // sqrt(E[xi^2])
    double ratio = 0.0;          // solution / (driver + terminal)
};

AprioriEstimate apriori_estimate_audit(const BsdeSolution& sol, const Generator& g,
                                       std::span<const double> terminal_values);

} // namespace bsdelab
