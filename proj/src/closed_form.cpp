#include "bsdelab/closed_form.hpp"

#include <cmath>
#include <stdexcept>

namespace bsdelab {

namespace {

double psi(double a, double s) {
    if (a == 0.0) return s;
    return std::expm1(a * s) / a;
}

} // namespace

double closed_form_linear_root(double a, double b, double c, const AffineTerminal& xi,
                               double horizon) {
    const double tau = horizon;
    return std::exp(a * tau) * (xi.lambda * b * tau + xi.mu) + c * psi(a, tau);
}

BsdeSolution closed_form_linear(double a, double b, double c, const AffineTerminal& xi,
                                const Scenario& scen, int terminal_node) {
    if (scen.dim() != 1)
        throw std::invalid_argument("closed_form_linear: requires d = 1");
    const TimeGrid& grid = scen.grid();
    const int T_node = terminal_node < 0 ? grid.steps : terminal_node;
    if (T_node < 1 || T_node > grid.steps)
        throw std::invalid_argument("closed_form_linear: terminal node outside grid");
    const int M = scen.path_count();
    const double T_prime = grid.node(T_node);

    BsdeSolution sol;
    sol.grid = grid;
    sol.dim = 1;
    sol.paths = M;
    sol.terminal_node = T_node;
    sol.seed = scen.seed();
    sol.tag = SolverTag::closed_form;
    sol.y.resize(static_cast<std::size_t>(M) * (T_node + 1));
    sol.z.resize(static_cast<std::size_t>(M) * (T_node + 1));

    for (int m = 0; m < M; ++m) {
        const PathView v = scen.view(m);
        for (int n = 0; n <= T_node; ++n) {
            const double tau = T_prime - grid.node(n);
            const double growth = std::exp(a * tau);
            sol.y[static_cast<std::size_t>(m) * (T_node + 1) + n] =
                growth * (xi.lambda * (v.w(n) + b * tau) + xi.mu) + c * psi(a, tau);
            sol.z[static_cast<std::size_t>(m) * (T_node + 1) + n] = xi.lambda * growth;
        }
    }
    return sol;
}

} // namespace bsdelab
