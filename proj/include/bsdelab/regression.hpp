#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bsdelab/event.hpp"
#include "bsdelab/scenario.hpp"

namespace bsdelab {

// Additional adapted regressor, active from `from_node` onward. The callable
// must only read path data up to node n.
struct ExtraFeature {
    std::string label;
    int from_node = 0;
    std::function<double(const PathView&, int)> eval;
};

// Cross-sectional regression basis: polynomials of the current state (Brownian
// level by default, forward state when present), optional extra features, and
// stratification by enlargement atom and/or a fixed event from its node onward.
struct RegressionBasis {
    int poly_degree = 2;
    bool use_forward_state = true;   // regress on forward state when the scenario has one
    bool stratify_by_atom = true;
    std::vector<ExtraFeature> extras;
    std::optional<Event> stratify_event;

    static RegressionBasis polynomial(int degree) {
        RegressionBasis b;
        b.poly_degree = degree;
        return b;
    }
};

struct RegressionDiagnostics {
    int basis_size = 0;
    int dropped_columns = 0;       // total over nodes/strata
    double worst_condition = 1.0;  // max over nodes of diag-pivot ratio
};

// Per-node regression context: evaluates features, partitions strata, and fits
// least squares by normal equations with pivot-threshold column dropping.
class NodeRegression {
public:
    NodeRegression(const Scenario& scen, const RegressionBasis& basis, int node, int jobs);

    int feature_count() const { return n_features_; }
    int strata_count() const { return n_strata_; }

    // Fits target and returns fitted values per path. Constant column always
    // present, so sample means are preserved exactly within each stratum.
    std::vector<double> fit(std::span<const double> target, RegressionDiagnostics* diag) const;

private:
    const Scenario& scen_;
    int node_ = 0;
    int jobs_ = 1;
    int n_features_ = 0;
    int n_strata_ = 1;
    std::vector<int> stratum_;       // per path
    std::vector<double> features_;   // [m * n_features + i]
};

} // namespace bsdelab
