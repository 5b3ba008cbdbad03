#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bsdelab/brownian.hpp"

namespace bsdelab {

// Forward diffusion coefficients b(t,x) and sigma(t,x) with their declared
// Lipschitz / growth constants. Coefficients must be pure functions of (t, x).
struct ForwardModel {
    std::string label;
    int state_dim = 1; // m
    int noise_dim = 1; // d
    std::function<void(double, std::span<const double>, std::span<double>)> drift;
    // Row-major state_dim x noise_dim.
    std::function<void(double, std::span<const double>, std::span<double>)> diffusion;
    double lipschitz_l1 = 0.0;
    double growth_l2 = 0.0;
};

// States at every grid node; frozen at the start point before the start node.
struct ForwardPaths {
    TimeGrid grid;
    int state_dim = 1;
    int paths = 1;
    int start_node = 0;
    std::vector<double> start_point;
    std::vector<double> states; // [(m*(N+1) + n)*state_dim + j]

    double x(int m, int n, int j = 0) const {
        return states[(static_cast<std::size_t>(m) * grid.nodes() + n) * state_dim + j];
    }
};

ForwardPaths euler_maruyama(const ForwardModel& model, const BrownianPaths& paths,
                            int start_node, std::span<const double> start_point,
                            int jobs = 1);

struct HAssumptionReport {
    double max_lipschitz_ratio = 0.0; // H1: (|Δb|+|Δσ|)/|Δx| over probe pairs
    double declared_l1 = 0.0;
    bool h1_pass = false;
    double max_growth_ratio = 0.0;    // H2: (|b|+|σ|)/(1+|x|)
    double declared_l2 = 0.0;
    bool h2_pass = false;
    double max_right_gap = 0.0;       // H3: |coef(t+h)-coef(t)| at the smallest h
    bool h3_pass = false;
    double max_left_gap = 0.0;        // recorded only; left jumps are allowed
    bool pass() const { return h1_pass && h2_pass && h3_pass; }
};

struct HProbeOptions {
    double horizon = 1.0;
    double box_radius = 5.0;
    double right_gap_tolerance = 1e-6;
};

HAssumptionReport check_h_assumptions(const ForwardModel& model, int probes,
                                      std::uint64_t seed,
                                      const HProbeOptions& opts = {});

// Catalog models (d = m = 1).
ForwardModel constant_model(double drift, double vol);
ForwardModel linear_drift_model(double a, double vol);
ForwardModel sin_drift_model();
ForwardModel square_drift_model(double declared_l1); // b = x^2; audit-failure demo
ForwardModel step_vol_model(double jump_time);       // sigma = 1_{t >= jump_time}

} // namespace bsdelab
