#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bsdelab/config.hpp"
#include "bsdelab/report.hpp"

namespace bsdelab {

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    int jobs = 1;
    double tolerance_scale = 1.0;
};

struct ExperimentOutcome {
    VerdictSet verdicts;
    std::vector<std::string> files_written;
    bool all_pass() const { return verdicts.all_pass(); }
};

// Runs the experiment described by the config and writes the result CSV,
// verdicts JSON and SVG chart into the output directory.
ExperimentOutcome run_experiment(const Config& cfg, const RunOverrides& overrides);

// Stable sorted listing of builtin generators, forward models and terminals.
std::string catalog_listing();

} // namespace bsdelab
