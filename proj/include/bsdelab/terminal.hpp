#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bsdelab/event.hpp"
#include "bsdelab/path_view.hpp"
#include "bsdelab/scenario.hpp"

namespace bsdelab {

// Square-integrable terminal payoff, evaluated per path from data available at
// the terminal node (measurability holds by construction).
struct TerminalCondition {
    std::string label;
    std::function<double(const PathView&)> eval;

    std::vector<double> evaluate(const Scenario& scen, int node = -1) const;
};

TerminalCondition terminal_w(int component = 0);                  // W_T
TerminalCondition terminal_scaled_w(double lambda, int component = 0);
TerminalCondition terminal_constant(double c);
TerminalCondition terminal_w_squared(int component = 0);          // W_T^2
TerminalCondition terminal_cos_w(int component = 0);              // cos(W_T)
TerminalCondition terminal_w_at(int node, int component = 0);     // W_{t_node}
TerminalCondition terminal_u_times_w(int component = 0);          // U * W_T
TerminalCondition terminal_forward(int component = 0);            // forward state at T

TerminalCondition scale_terminal(double alpha, const TerminalCondition& base);
TerminalCondition add_terminals(const TerminalCondition& a, const TerminalCondition& b);
TerminalCondition shift_terminal(const TerminalCondition& base, double c);
TerminalCondition mask_terminal(const Event& event, const TerminalCondition& base);

} // namespace bsdelab
