#include "bsdelab/terminal.hpp"

#include <cmath>

namespace bsdelab {

std::vector<double> TerminalCondition::evaluate(const Scenario& scen, int node) const {
    (void)node;
    std::vector<double> out(scen.path_count());
    for (int m = 0; m < scen.path_count(); ++m) out[m] = eval(scen.view(m));
    return out;
}

TerminalCondition terminal_w(int component) {
    return {"w_T", [component](const PathView& v) { return v.w(v.grid->steps, component); }};
}

TerminalCondition terminal_scaled_w(double lambda, int component) {
    return {"scaled_w_T(" + std::to_string(lambda) + ")",
            [lambda, component](const PathView& v) {
                return lambda * v.w(v.grid->steps, component);
            }};
}

TerminalCondition terminal_constant(double c) {
    return {"constant(" + std::to_string(c) + ")", [c](const PathView&) { return c; }};
}

TerminalCondition terminal_w_squared(int component) {
    return {"w_T_squared", [component](const PathView& v) {
                const double w = v.w(v.grid->steps, component);
                return w * w;
            }};
}

TerminalCondition terminal_cos_w(int component) {
    return {"cos_w_T",
            [component](const PathView& v) { return std::cos(v.w(v.grid->steps, component)); }};
}

TerminalCondition terminal_w_at(int node, int component) {
    return {"w_at(node=" + std::to_string(node) + ")",
            [node, component](const PathView& v) { return v.w(node, component); }};
}

TerminalCondition terminal_u_times_w(int component) {
    return {"u_times_w_T",
            [component](const PathView& v) { return v.u * v.w(v.grid->steps, component); }};
}

TerminalCondition terminal_forward(int component) {
    return {"forward_T", [component](const PathView& v) { return v.x(v.grid->steps, component); }};
}

TerminalCondition scale_terminal(double alpha, const TerminalCondition& base) {
    auto inner = base.eval;
    return {std::to_string(alpha) + "*" + base.label,
            [alpha, inner](const PathView& v) { return alpha * inner(v); }};
}

TerminalCondition add_terminals(const TerminalCondition& a, const TerminalCondition& b) {
    auto ea = a.eval;
    auto eb = b.eval;
    return {a.label + "+" + b.label, [ea, eb](const PathView& v) { return ea(v) + eb(v); }};
}

TerminalCondition shift_terminal(const TerminalCondition& base, double c) {
    auto inner = base.eval;
    return {base.label + "+" + std::to_string(c),
            [c, inner](const PathView& v) { return inner(v) + c; }};
}

TerminalCondition mask_terminal(const Event& event, const TerminalCondition& base) {
    auto inner = base.eval;
    auto indicator = event.indicator;
    return {"1_{" + event.label + "}*" + base.label,
            [indicator, inner](const PathView& v) {
                return indicator[v.m] ? inner(v) : 0.0;
            }};
}

} // namespace bsdelab
