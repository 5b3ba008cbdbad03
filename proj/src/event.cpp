#include "bsdelab/event.hpp"

#include <stdexcept>

namespace bsdelab {

Event half_space_event(const Scenario& scen, int node, double threshold, int component) {
    Event e;
    e.label = "half_space(node=" + std::to_string(node) + ",thr=" + std::to_string(threshold) + ")";
    e.node = node;
    e.indicator.resize(scen.path_count());
    for (int m = 0; m < scen.path_count(); ++m)
        e.indicator[m] = scen.view(m).w(node, component) > threshold ? 1 : 0;
    return e;
}

Event band_event(const Scenario& scen, int node, double lo, double hi, int component) {
    Event e;
    e.label = "band(node=" + std::to_string(node) + ")";
    e.node = node;
    e.indicator.resize(scen.path_count());
    for (int m = 0; m < scen.path_count(); ++m) {
        const double w = scen.view(m).w(node, component);
        e.indicator[m] = (w > lo && w <= hi) ? 1 : 0;
    }
    return e;
}

Event atom_event(const Scenario& scen, int atom) {
    if (!scen.has_enlargement())
        throw std::invalid_argument("atom_event: scenario has no enlargement variable");
    Event e;
    e.label = "atom(" + std::to_string(atom) + ")";
    e.node = -1;
    e.indicator.resize(scen.path_count());
    for (int m = 0; m < scen.path_count(); ++m)
        e.indicator[m] = scen.enlargement().atom_index[m] == atom ? 1 : 0;
    return e;
}

} // namespace bsdelab
