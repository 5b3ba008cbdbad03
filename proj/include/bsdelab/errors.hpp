#pragma once

#include <stdexcept>
#include <string>

namespace bsdelab {

// Thrown when a simulation or regression produces non-finite values.
// Carries the (path, node) coordinates of the first failure.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(std::string context, long path, long node)
        : std::runtime_error(context + " (path " + std::to_string(path) +
                             ", node " + std::to_string(node) + ")"),
          path_(path),
          node_(node) {}

    long path() const noexcept { return path_; }
    long node() const noexcept { return node_; }

private:
    long path_;
    long node_;
};

} // namespace bsdelab
