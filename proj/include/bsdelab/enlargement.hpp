#pragma once

#include <cstdint>
#include <vector>

namespace bsdelab {

// Finite-support random variable drawn at time 0, independent of the Brownian
// increments (separate generator stream). Augmenting the filtration with it is
// the computable stand-in for a filtration larger than the natural one.
struct EnlargementVariable {
    std::vector<double> atoms;
    std::vector<double> probabilities;
    std::vector<int> atom_index; // per path

    double value(int m) const { return atoms[atom_index[m]]; }
    int atom_count() const { return static_cast<int>(atoms.size()); }
};

EnlargementVariable sample_enlargement(const std::vector<double>& atoms,
                                       const std::vector<double>& probabilities,
                                       int paths, std::uint64_t seed);

} // namespace bsdelab
