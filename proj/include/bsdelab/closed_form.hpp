#pragma once

#include "bsdelab/bsde.hpp"
#include "bsdelab/scenario.hpp"

namespace bsdelab {

// Terminal of the form lambda * W_T' + mu (lambda = 0 gives a constant).
struct AffineTerminal {
    double lambda = 1.0;
    double mu = 0.0;
};

// Analytic solution for the linear driver g = a*y + b*z + c with d = 1:
//   Y_t = e^{a(T-t)} (lambda*(W_t + b(T-t)) + mu) + c * psi_a(T-t),
//   Z_t = lambda e^{a(T-t)},
// where psi_a(s) = (e^{as} - 1)/a, psi_0(s) = s (the measure shift by b moves
// the conditional mean of W_T to W_t + b(T-t)).
BsdeSolution closed_form_linear(double a, double b, double c, const AffineTerminal& xi,
                                const Scenario& scen, int terminal_node = -1);

// Root value on [0, horizon] without simulating paths (W_0 = 0).
double closed_form_linear_root(double a, double b, double c, const AffineTerminal& xi,
                               double horizon);

} // namespace bsdelab
