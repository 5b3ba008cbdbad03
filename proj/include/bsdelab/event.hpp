#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsdelab/scenario.hpp"

namespace bsdelab {

// Per-path 0/1 indicator with the node at which it becomes measurable
// (node = -1 means measurable at time 0 through the enlargement variable).
struct Event {
    std::string label;
    int node = 0;
    std::vector<std::uint8_t> indicator;

    bool contains(int m) const { return indicator[m] != 0; }
    double probability() const {
        double s = 0.0;
        for (auto v : indicator) s += v;
        return indicator.empty() ? 0.0 : s / static_cast<double>(indicator.size());
    }
};

Event half_space_event(const Scenario& scen, int node, double threshold, int component = 0);
Event band_event(const Scenario& scen, int node, double lo, double hi, int component = 0);
Event atom_event(const Scenario& scen, int atom);

} // namespace bsdelab
