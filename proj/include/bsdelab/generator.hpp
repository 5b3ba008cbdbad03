#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bsdelab {

// Structural claims about a driver. Audited by check_a_assumptions and the
// characterization suites, never trusted blindly.
struct GeneratorFlags {
    bool independent_of_y = false;
    bool positively_homogeneous = false;
    bool subadditive = false;
    bool convex_in_z = false; // joint (y,z) convexity; equals z-convexity when y-independent
    bool satisfies_a5 = false; // g(t, y, 0) = 0 for all y
};

// Coefficients of an affine driver a*y + b*z + c (d = 1); set for catalog
// drivers that admit the analytic solution route.
struct LinearDriver {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

// BSDE driver g(t, y, z) with its declared Lipschitz constant. Callables must
// be pure; they are evaluated concurrently.
struct Generator {
    std::string label;
    std::function<double(double, double, std::span<const double>)> eval;
    double lipschitz_k = 0.0;
    GeneratorFlags flags;
    std::optional<LinearDriver> linear_form;

    double operator()(double t, double y, std::span<const double> z) const {
        return eval(t, y, z);
    }
    double operator()(double t, double y, double z) const {
        return eval(t, y, std::span<const double>(&z, 1));
    }
};

// Catalog.
Generator zero_generator();
Generator linear_generator(double a, double b, double c); // a*y + b*z + c (d = 1)
Generator kappa_abs_z_generator(double kappa);            // kappa * |z|
Generator discount_generator(double beta);                // -beta * y
Generator quadratic_z_generator(double declared_k);       // z + 0.1 z^2; Lipschitz-gate demo
Generator time_step_generator(double jump_time);          // z * 1_{t >= jump}; left-discontinuous

// Shifts the driver's time argument: result(t,y,z) = base(offset + t, y, z).
Generator shift_time(const Generator& base, double offset);

struct AAssumptionReport {
    double max_lipschitz_ratio = 0.0; // A1: |Δg| / (|Δy| + |Δz|)
    double declared_k = 0.0;
    bool a1_pass = false;
    double sup_g_at_origin = 0.0;     // A3 sample: sup_t |g(t,0,0)| on the grid
    bool a3_finite = false;
    double max_right_gap = 0.0;       // A4 one-sided probes
    bool a4_pass = false;
    double max_left_gap = 0.0;        // recorded only
    double max_abs_g_y0 = 0.0;        // A5: sup |g(t,y,0)|
    double a5_witness_y = 0.0;
    double a5_witness_value = 0.0;
    bool a5_pass = false;
    bool pass_a1_a5() const { return a1_pass && a5_pass; }
};

struct AProbeOptions {
    double horizon = 1.0;
    double y_radius = 5.0;
    double z_radius = 5.0;
    double right_gap_tolerance = 1e-6;
    double a5_tolerance = 1e-12;
    int dim = 1;
};

AAssumptionReport check_a_assumptions(const Generator& g, int probes, std::uint64_t seed,
                                      const AProbeOptions& opts = {});

} // namespace bsdelab
