#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsdelab/bsde.hpp"
#include "bsdelab/closed_form.hpp"
#include "bsdelab/forward.hpp"
#include "bsdelab/g_expectation.hpp"

namespace bsdelab {

// Difference-quotient probe: restart the equation on [t, t+eps] with the
// small-horizon affine terminal and read the quotient (Y_t - y)/eps against
// the driver value it must recover in the limit.
struct RepresentationProbe {
    double t = 0.0;
    double y = 0.0;
    std::vector<double> z;            // Brownian form direction (size d)
    std::vector<double> x, p;         // forward form state / direction (size m)
    std::vector<double> epsilons = {0.2, 0.1, 0.05, 0.025}; // decreasing
};

enum class SubSolver { automatic, lsmc, analytic };

struct RepresentationConfig {
    TimeGrid base_grid{1.0, 64}; // probe times and epsilons align to this grid
    int substeps = 32;           // each [t, t+eps] is re-discretized with this many steps
    int paths = 1 << 14;
    std::uint64_t seed = 7;      // shared across epsilon levels (common random numbers)
    int picard_iters = 3;
    SubSolver subsolver = SubSolver::automatic;
    int jobs = 1;
};

struct RepresentationRow {
    double eps = 0.0;
    double estimate = 0.0;   // mean difference quotient
    double l2_error = 0.0;   // sample L2 norm of (quotient - target)
    double std_error = 0.0;
};

struct RepresentationReport {
    double target = 0.0;
    std::vector<RepresentationRow> rows; // in the probe's epsilon order

    // Non-increasing down the ladder, allowing one inversion within one SE.
    bool errors_non_increasing() const;
    double final_error() const { return rows.empty() ? 0.0 : rows.back().l2_error; }
};

RepresentationReport difference_quotient_brownian(const Generator& g,
                                                  const RepresentationProbe& probe,
                                                  const RepresentationConfig& cfg);

RepresentationReport difference_quotient_forward(const Generator& g, const ForwardModel& model,
                                                 const RepresentationProbe& probe,
                                                 const RepresentationConfig& cfg);

struct ProbePointResult {
    double t = 0.0, y = 0.0, z = 0.0;
    double d1 = 0.0, d2 = 0.0;
    double se = 0.0;
    bool dominance_ok = false; // d1 <= d2 within noise
};

struct ConverseComparisonConfig {
    RepresentationConfig rep;
    SolveOptions solve;
    double probe_eps = 0.03125;          // smallest grid-aligned epsilon (2/64)
    std::vector<double> probe_levels_y = {-1.0, 0.0, 1.0};
    std::vector<double> probe_levels_z = {-1.0, 0.0, 1.0};
    int probe_time_count = 8;            // t in {0, T/8, ..., 7T/8}
    double tolerance_floor = 0.02;
};

struct ConverseComparisonReport {
    bool hypothesis_holds = false; // Y(g1) <= Y(g2) across the terminal family
    std::vector<ExpectationComparisonRow> solution_rows;
    std::vector<ProbePointResult> probes;
    std::vector<ProbePointResult> counterexamples;
    bool dominance = false; // g1 <= g2 at every probe point within noise
};

// Converse direction: solution-level ordering across a terminal family, then
// pointwise driver dominance recovered through the smallest-epsilon quotients.
ConverseComparisonReport converse_comparison(const Generator& g1, const Generator& g2,
                                             const std::vector<TerminalCondition>& family,
                                             const Scenario& scen,
                                             const ConverseComparisonConfig& cfg);

enum class GeneratorProperty {
    positive_homogeneity,
    translation_invariance,
    subadditivity,
    convexity
};

enum class CharacterizationDirection { generator_to_solution, solution_to_generator };

struct CharacterizationConfig {
    SolveOptions solve;
    double tolerance = 0.03;
    double tolerance_scale = 1.0;
    std::vector<double> alphas = {0.0, 0.5, 2.0};
    std::vector<double> convex_alphas = {0.25, 0.5, 0.75};
    int probes = 2048;
    std::uint64_t probe_seed = 5;
    double y_radius = 2.0;
    double z_radius = 2.0;

    double tol() const { return tolerance * tolerance_scale; }
};

struct CharacterizationReport {
    GeneratorProperty property{};
    CharacterizationDirection direction{};
    bool solution_level_holds = false;
    double solution_residual = 0.0;   // worst identity residual / inequality violation
    bool generator_level_holds = false;
    double generator_violation = 0.0; // worst pointwise violation on the probe box
    bool consistent = false;          // both levels agree
    std::string detail;
};

CharacterizationReport characterization_suite(const Generator& g, GeneratorProperty property,
                                              CharacterizationDirection direction,
                                              const Scenario& scen,
                                              const CharacterizationConfig& cfg);

// Equivalences at the expectation level (requires the A1/A5 gate): for each of
// the four properties, the E_g level, the conditional level, and the driver
// level must agree.
struct EquivalenceRow {
    std::string id;
    GeneratorProperty property{};
    bool expectation_level = false;
    bool conditional_level = false;
    bool generator_level = false;
    double worst_residual = 0.0;
    bool consistent = false;
};

std::vector<EquivalenceRow> axiom_equivalence_suite(const Generator& g, const Scenario& scen,
                                                    const CharacterizationConfig& cfg);

const char* property_name(GeneratorProperty p);

} // namespace bsdelab
