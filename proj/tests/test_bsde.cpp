#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bsdelab/bsde.hpp"
#include "bsdelab/closed_form.hpp"
#include "bsdelab/errors.hpp"
#include "bsdelab/stats.hpp"
#include "bsdelab/tree.hpp"

using namespace bsdelab;

namespace {

Scenario default_scenario(int N = 64, int M = 1 << 14, std::uint64_t seed = 7) {
    return make_scenario(make_grid(1.0, N), 1, M, seed);
}

std::vector<double> w_terminal(const Scenario& scen) {
    std::vector<double> xi(scen.path_count());
    for (int m = 0; m < scen.path_count(); ++m)
        xi[m] = scen.view(m).w(scen.grid().steps);
    return xi;
}

} // namespace

// ---- oracles first: lattice dynamic programming and the analytic linear form
// cross-validate each other before either is used against the regression path.

TEST_CASE("tree oracle: zero driver gives the martingale mean exactly") {
    const auto sol = solve_tree(zero_generator(), [](double w) { return w; }, 1.0, 16);
    CHECK(sol.y0() == 0.0);
}

TEST_CASE("tree oracle: drift accумulation for g = z is exact at any depth") {
    // With terminal W_T the lattice recursion adds b*dt per level, so the root
    // value is b*T with no depth bias.
    for (int N : {4, 16, 24}) {
        const auto sol = solve_tree(linear_generator(0.0, 1.0, 0.0), [](double w) { return w; },
                                    1.0, N);
        CHECK(sol.y0() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("tree oracle: kappa |z| with terminal W_T acts linearly (Z > 0 everywhere)") {
    for (int N : {8, 16, 24}) {
        const auto sol = solve_tree(kappa_abs_z_generator(0.5), [](double w) { return w; }, 1.0, N);
        CHECK(sol.y0() == doctest::Approx(0.5).epsilon(1e-12));
        for (int n = 0; n < N; ++n)
            for (int j = 0; j <= n; ++j) CHECK(sol.z[n][j] > 0.0);
    }
}

TEST_CASE("tree oracle guards") {
    CHECK_THROWS_AS(solve_tree(zero_generator(), [](double w) { return w; }, 1.0, 25),
                    std::invalid_argument);
    // K * dt = 30/24 >= 1: the scalar fixed point cannot contract.
    CHECK_THROWS_AS(solve_tree(kappa_abs_z_generator(30.0), [](double w) { return w; }, 1.0, 24),
                    std::invalid_argument);
}

TEST_CASE("analytic linear solution agrees with the tree at N = 24") {
    // g = z, terminal W_T.
    CHECK(closed_form_linear_root(0.0, 1.0, 0.0, {1.0, 0.0}, 1.0) == doctest::Approx(1.0));
    const auto tree_gz = solve_tree(linear_generator(0.0, 1.0, 0.0),
                                    [](double w) { return w; }, 1.0, 24);
    CHECK(std::abs(tree_gz.y0() - 1.0) <= 0.01);

    // g = -y, terminal 1: backward ODE value e^{-1}.
    CHECK(closed_form_linear_root(-1.0, 0.0, 0.0, {0.0, 1.0}, 1.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    const auto tree_disc =
        solve_tree(discount_generator(1.0), [](double) { return 1.0; }, 1.0, 24);
    CHECK(std::abs(tree_disc.y0() - std::exp(-1.0)) <= 0.01);

    // Degenerate coefficients: Y_t = W_t.
    const auto scen = default_scenario(16, 256, 3);
    const auto sol = closed_form_linear(0.0, 0.0, 0.0, {1.0, 0.0}, scen);
    for (int m = 0; m < 256; ++m)
        for (int n = 0; n <= 16; ++n)
            CHECK(sol.y_at(m, n) == doctest::Approx(scen.view(m).w(n)).epsilon(1e-14));

    CHECK_THROWS_AS(
        closed_form_linear(0.0, 1.0, 0.0, {1.0, 0.0}, make_scenario(make_grid(1.0, 4), 2, 8, 1)),
        std::invalid_argument);
}

// ---- regression solver against the oracles.

TEST_CASE("lsmc: zero driver reproduces the conditional-expectation martingale") {
    const auto scen = default_scenario();
    const auto sol = solve_lsmc(zero_generator(), w_terminal(scen), scen, {});
    CHECK(std::abs(sol.y0()) <= 3.0 * std::sqrt(1.0 / scen.path_count()));

    // Y at an interior node tracks W, and Z tracks 1.
    const int mid = 32;
    std::vector<double> w_mid(scen.path_count());
    for (int m = 0; m < scen.path_count(); ++m) w_mid[m] = scen.view(m).w(mid);
    CHECK(rmse(sol.node_column(mid), w_mid) <= 0.02);
    CHECK(mean(sol.z_column(mid)) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("lsmc: g = z matches the analytic value within 0.02") {
    const auto scen = default_scenario();
    const auto sol = solve_lsmc(linear_generator(0.0, 1.0, 0.0), w_terminal(scen), scen, {});
    CHECK(std::abs(sol.y0() - 1.0) <= 0.02);

    const auto exact = closed_form_linear(0.0, 1.0, 0.0, {1.0, 0.0}, scen);
    CHECK(rmse(sol.node_column(32), exact.node_column(32)) <= 0.03);
}

TEST_CASE("lsmc: discount driver hits e^{-1} within 0.01") {
    const auto scen = default_scenario();
    std::vector<double> ones(scen.path_count(), 1.0);
    const auto sol = solve_lsmc(discount_generator(1.0), ones, scen, {});
    CHECK(std::abs(sol.y0() - std::exp(-1.0)) <= 0.01);
}

TEST_CASE("lsmc: terminal values stored bitwise and non-contraction rejected") {
    const auto scen = default_scenario(16, 512, 5);
    const auto xi = w_terminal(scen);
    const auto sol = solve_lsmc(kappa_abs_z_generator(0.5), xi, scen, {});
    for (int m = 0; m < 512; ++m) CHECK(sol.y_at(m, 16) == xi[m]);

    CHECK_THROWS_AS(solve_lsmc(kappa_abs_z_generator(20.0), xi, scen, {}),
                    std::invalid_argument); // K*dt = 20/16 >= 1

    auto bad = xi;
    bad[3] = std::nan("");
    CHECK_THROWS_AS(solve_lsmc(zero_generator(), bad, scen, {}), NumericalFailure);
}

TEST_CASE("lsmc: adaptedness, twin prefixes get identical values") {
    // Two paths sharing increments up to node n0 must receive bitwise equal
    // Y and Z there: the regression reads only time-n features.
    const TimeGrid grid = make_grid(1.0, 16);
    BrownianPaths paths = simulate_brownian(grid, 1, 4096, 11);
    const int n0 = 8;
    for (int n = 0; n < n0; ++n) paths.increments[1 * grid.steps + n] = paths.dw(0, n);
    const Scenario scen(std::move(paths));

    const auto sol = solve_lsmc(kappa_abs_z_generator(0.5), w_terminal(scen), scen, {});
    for (int n = 0; n <= n0; ++n) {
        CHECK(sol.y_at(0, n) == sol.y_at(1, n));
        if (n < n0) CHECK(sol.z_at(0, n) == sol.z_at(1, n));
    }
}

TEST_CASE("lsmc: permutation of paths permutes the solution (up to roundoff)") {
    const TimeGrid grid = make_grid(1.0, 8);
    const int M = 2048;
    BrownianPaths paths = simulate_brownian(grid, 1, M, 13);
    BrownianPaths reversed = paths;
    for (int m = 0; m < M; ++m)
        for (int n = 0; n < grid.steps; ++n)
            reversed.increments[static_cast<std::size_t>(m) * grid.steps + n] =
                paths.dw(M - 1 - m, n);

    const Scenario scen_a(std::move(paths));
    const Scenario scen_b(std::move(reversed));
    const auto xi_a = w_terminal(scen_a);
    const auto xi_b = w_terminal(scen_b);
    const auto sol_a = solve_lsmc(kappa_abs_z_generator(0.5), xi_a, scen_a, {});
    const auto sol_b = solve_lsmc(kappa_abs_z_generator(0.5), xi_b, scen_b, {});
    for (int m = 0; m < M; m += 97)
        for (int n = 0; n <= grid.steps; ++n)
            CHECK(sol_a.y_at(m, n) == doctest::Approx(sol_b.y_at(M - 1 - m, n)).epsilon(1e-9));
}

TEST_CASE("lsmc: Picard sweeps contract at rate K dt") {
    const auto scen = default_scenario(16, 4096, 9);
    SolveOptions opts;
    opts.picard_iters = 4;
    const auto sol = solve_lsmc(kappa_abs_z_generator(0.5), w_terminal(scen), scen, opts);
    const double kdt = 0.5 / 16.0;
    const auto& deltas = sol.diagnostics.picard_deltas;
    REQUIRE(deltas.size() == 4);
    for (std::size_t i = 1; i < deltas.size(); ++i)
        CHECK(deltas[i] <= kdt * deltas[i - 1] * (1.0 + 1e-9) + 1e-15);
    CHECK(sol.diagnostics.picard_last_delta <=
          kdt / (1.0 - kdt) * sol.diagnostics.picard_first_delta + 1e-15);
}

TEST_CASE("lsmc: parallel solve is bit-identical") {
    const auto scen = default_scenario(16, 5000, 23);
    SolveOptions serial;
    SolveOptions threaded;
    threaded.jobs = 4;
    const auto a = solve_lsmc(kappa_abs_z_generator(0.5), w_terminal(scen), scen, serial);
    const auto b = solve_lsmc(kappa_abs_z_generator(0.5), w_terminal(scen), scen, threaded);
    CHECK(a.y == b.y);
    CHECK(a.z == b.z);
}

TEST_CASE("oracle equivalence: lsmc matches the tree for every catalog driver") {
    const auto scen = default_scenario(16, 1 << 14, 7);
    const auto xi = w_terminal(scen);
    const auto xi_fn = [](double w) { return w; };
    for (const Generator& g :
         {zero_generator(), linear_generator(0.0, 1.0, 0.0), kappa_abs_z_generator(0.5),
          discount_generator(1.0)}) {
        CAPTURE(g.label);
        const auto lsmc = solve_lsmc(g, xi, scen, {});
        const auto tree = solve_tree(g, xi_fn, 1.0, 16);
        CHECK(std::abs(lsmc.y0() - tree.y0()) <= 0.02);
    }
}

// ---- duality identity and estimate audits.

TEST_CASE("transposition: constant test process reduces to mean preservation") {
    const auto scen = default_scenario(64, 1 << 13, 7);
    const Generator g = linear_generator(0.0, 1.0, 0.0);
    const auto sol = solve_lsmc(g, w_terminal(scen), scen, {});
    const auto test = make_dual_test(
        scen, 0, 64, [](const PathView&, int) { return 0.0; },
        [](const PathView&, int, int) { return 0.0; }, [](const PathView&) { return 1.0; },
        "constant");
    const auto res = transposition_residual(sol, g, scen, {test});
    REQUIRE(res.size() == 1);
    // E[xi + sum g dt] = E[Y_0] holds exactly by regression mean preservation.
    CHECK(res[0].residual <= 1e-9 * res[0].scale);
}

TEST_CASE("transposition: zero driver duality within noise plus O(dt)") {
    const auto scen = default_scenario(64, 1 << 13, 7);
    const Generator g = zero_generator();
    const auto sol = solve_lsmc(g, w_terminal(scen), scen, {});
    const auto test = make_dual_test(
        scen, 0, 64, [](const PathView& v, int n) { return std::tanh(v.w(n)); },
        [](const PathView& v, int n, int) { return std::cos(v.w(n)); },
        [](const PathView&) { return 0.5; }, "generic");
    const auto res = transposition_residual(sol, g, scen, {test});
    CHECK(res[0].residual <=
          std::max(3.0 * res[0].standard_error, 5.0 * scen.grid().dt() * res[0].scale));
}

TEST_CASE("transposition: drift-only test process against the analytic solution") {
    // g = z, xi = W_T, u = 1, v = 0, eta = 0 on [0, T]: both sides equal
    // T^2/2 in closed form (X_r = r, E[Y_r] = T - r).
    const double T = 1.0;
    const double continuum_lhs = T * T / 2.0;
    const double continuum_rhs = T * T / 2.0;
    CHECK(continuum_lhs == continuum_rhs);

    const auto scen = default_scenario(64, 1 << 14, 7);
    const Generator g = linear_generator(0.0, 1.0, 0.0);
    const auto sol = closed_form_linear(0.0, 1.0, 0.0, {1.0, 0.0}, scen);
    const auto test = make_dual_test(
        scen, 0, 64, [](const PathView&, int) { return 1.0; },
        [](const PathView&, int, int) { return 0.0; }, [](const PathView&) { return 0.0; },
        "drift-only");
    const auto res = transposition_residual(sol, g, scen, {test});
    CHECK(std::abs(res[0].lhs - continuum_lhs) <= 0.02);
    CHECK(std::abs(res[0].rhs - continuum_rhs) <= 0.02);
    CHECK(res[0].residual <= 0.01);
}

TEST_CASE("transposition: restarted identity on a subinterval") {
    const auto scen = default_scenario(64, 1 << 13, 7);
    const Generator g = kappa_abs_z_generator(0.5);
    const auto sol = solve_lsmc(g, w_terminal(scen), scen, {});
    const auto test = make_dual_test(
        scen, 16, 48, [](const PathView& v, int n) { return 0.3 + std::tanh(v.w(n)); },
        [](const PathView& v, int n, int) { return std::sin(v.w(n)); },
        [](const PathView& v) { return std::tanh(v.w(16)); }, "subinterval");
    const auto res = transposition_residual(sol, g, scen, {test});
    CHECK(res[0].residual <=
          std::max(3.0 * res[0].standard_error, 5.0 * scen.grid().dt() * res[0].scale));
}

TEST_CASE("a-priori estimate: scaling and family stability") {
    const auto scen = default_scenario(64, 1 << 13, 7);
    const Generator gz = linear_generator(0.0, 1.0, 0.0);

    // Linearity: doubling the terminal doubles the solution norm exactly.
    const auto xi = w_terminal(scen);
    std::vector<double> xi2(xi);
    for (double& v : xi2) v *= 2.0;
    const auto sol1 = solve_lsmc(zero_generator(), xi, scen, {});
    const auto sol2 = solve_lsmc(zero_generator(), xi2, scen, {});
    const auto est1 = apriori_estimate_audit(sol1, zero_generator(), xi);
    const auto est2 = apriori_estimate_audit(sol2, zero_generator(), xi2);
    CHECK(est1.ratio > 0.0);
    CHECK(std::isfinite(est1.solution_norm));
    CHECK(est2.solution_norm == doctest::Approx(2.0 * est1.solution_norm).epsilon(1e-12));
    CHECK(est2.ratio == doctest::Approx(est1.ratio).epsilon(1e-12));

    // Family xi = lambda W_T under g = z: ratio constant within 5%.
    std::vector<double> ratios;
    for (double lambda : {1.0, 2.0, 4.0}) {
        std::vector<double> xs(xi);
        for (double& v : xs) v *= lambda;
        const auto sol = solve_lsmc(gz, xs, scen, {});
        ratios.push_back(apriori_estimate_audit(sol, gz, xs).ratio);
    }
    for (double r : ratios) CHECK(std::abs(r - ratios[0]) <= 0.05 * ratios[0]);
}

// ---- comparison ordering, including the strict case.

TEST_CASE("comparison: dominated driver and terminal order the solutions") {
    const auto scen = default_scenario(64, 1 << 13, 7);
    const auto xi2 = w_terminal(scen);
    std::vector<double> xi1(xi2);
    for (double& v : xi1) v += 1.0;

    const auto sol1 = solve_lsmc(kappa_abs_z_generator(0.5), xi1, scen, {});
    const auto sol2 = solve_lsmc(zero_generator(), xi2, scen, {});
    for (int n : {0, 16, 32, 48}) {
        std::vector<double> gap(scen.path_count());
        for (int m = 0; m < scen.path_count(); ++m) gap[m] = sol1.y_at(m, n) - sol2.y_at(m, n);
        CHECK(mean(gap) >= -3.0 * standard_error(gap));
    }
}

TEST_CASE("comparison strictness: |z| vs z splits on the sign of Z") {
    const auto scen = default_scenario(64, 1 << 14, 7);
    const Generator g1 = kappa_abs_z_generator(0.5);
    const Generator g2 = linear_generator(0.0, 0.5, 0.0);

    // Terminal -W_T: Z < 0, so |z| and z differ along the whole solution and
    // the gap is 2 * 0.5 * E int |Z| = 1 in closed form.
    std::vector<double> minus_w(w_terminal(scen));
    for (double& v : minus_w) v = -v;
    const auto a1 = solve_lsmc(g1, minus_w, scen, {});
    const auto a2 = solve_lsmc(g2, minus_w, scen, {});
    CHECK(a1.y0() - a2.y0() == doctest::Approx(1.0).epsilon(0.05));

    // Terminal +W_T: Z > 0, equality case.
    const auto b1 = solve_lsmc(g1, w_terminal(scen), scen, {});
    const auto b2 = solve_lsmc(g2, w_terminal(scen), scen, {});
    std::vector<double> gap(scen.path_count());
    for (int m = 0; m < scen.path_count(); ++m) gap[m] = b1.y_at(m, 0) - b2.y_at(m, 0);
    CHECK(std::abs(mean(gap)) <= std::max(3.0 * standard_error(gap), 1e-3));
}

// ---- enlarged filtration: node-0 value is a random variable over atoms.

TEST_CASE("enlargement: stratified solve reports the per-atom value") {
    const TimeGrid grid = make_grid(1.0, 32);
    const int M = 1 << 14;
    BrownianPaths paths = simulate_brownian(grid, 1, M, 7);
    auto u = sample_enlargement({-1.0, 1.0}, {0.5, 0.5}, M, 7);
    const Scenario scen(std::move(paths), std::move(u));

    // Terminal U * W_T: within each atom the problem is +/- W_T under kappa|z|,
    // both worth kappa * T.
    std::vector<double> xi(M);
    for (int m = 0; m < M; ++m) {
        const auto v = scen.view(m);
        xi[m] = v.u * v.w(grid.steps);
    }
    const auto sol = solve_lsmc(kappa_abs_z_generator(0.5), xi, scen, {});
    REQUIRE(sol.y0_atoms.size() == 2);
    CHECK(sol.y0_atoms[0] == doctest::Approx(0.5).epsilon(0.06));
    CHECK(sol.y0_atoms[1] == doctest::Approx(0.5).epsilon(0.06));
    CHECK(std::abs(sol.y0_atoms[0] - sol.y0_atoms[1]) <= 0.03);
}
