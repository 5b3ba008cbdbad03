#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bsdelab/generator.hpp"
#include "bsdelab/rng.hpp"

using namespace bsdelab;

TEST_CASE("audit: g = z within K = 1, A5 holds") {
    const auto rep = check_a_assumptions(linear_generator(0.0, 1.0, 0.0), 4096, 5);
    CHECK(rep.a1_pass);
    CHECK(rep.a5_pass);
    CHECK(rep.a3_finite);
    CHECK(rep.a4_pass);
    CHECK(rep.sup_g_at_origin == 0.0);
}

TEST_CASE("audit: kappa |z| with an understated K fails A1 with ratio about kappa") {
    Generator g = kappa_abs_z_generator(0.5);
    g.lipschitz_k = 0.4; // understated on purpose
    const auto rep = check_a_assumptions(g, 10000, 5);
    CHECK_FALSE(rep.a1_pass);
    CHECK(rep.max_lipschitz_ratio > 0.49);
    CHECK(rep.max_lipschitz_ratio <= 0.5 + 1e-12);
}

TEST_CASE("audit: y + z fails A5 with a witness") {
    const auto rep = check_a_assumptions(linear_generator(1.0, 1.0, 0.0), 4096, 5);
    CHECK_FALSE(rep.a5_pass);
    CHECK(rep.max_abs_g_y0 > 0.5);
    // g(t, y, 0) = y, so the witness value equals the witness level.
    CHECK(rep.a5_witness_value == doctest::Approx(rep.a5_witness_y).epsilon(1e-12));
}

TEST_CASE("audit: time-step driver is right-continuous, left jump recorded") {
    const auto rep = check_a_assumptions(time_step_generator(0.5), 2048, 5);
    CHECK(rep.a4_pass);
    CHECK(rep.max_left_gap > 0.1); // |z| sized jump observed from the left
}

TEST_CASE("catalog flags") {
    const Generator kappa = kappa_abs_z_generator(0.5);
    CHECK(kappa.lipschitz_k == 0.5);
    CHECK(kappa.flags.independent_of_y);
    CHECK(kappa.flags.positively_homogeneous);
    CHECK(kappa.flags.subadditive);
    CHECK(kappa.flags.convex_in_z);
    CHECK(kappa.flags.satisfies_a5);

    const Generator gz = linear_generator(0.0, 1.0, 0.0);
    CHECK(gz.flags.satisfies_a5);
    CHECK(gz.lipschitz_k == 1.0);

    const Generator gc = linear_generator(0.0, 1.0, 0.5);
    CHECK_FALSE(gc.flags.satisfies_a5);
    CHECK_FALSE(gc.flags.positively_homogeneous);

    const Generator disc = discount_generator(1.0);
    CHECK(disc(0.3, 2.0, 0.0) == -2.0);
    CHECK_FALSE(disc.flags.satisfies_a5); // g(t, 1, 0) = -1
    CHECK_FALSE(disc.flags.independent_of_y);
    CHECK(disc.flags.positively_homogeneous);

    CHECK(zero_generator()(0.1, 3.0, -2.0) == 0.0);
    CHECK(zero_generator().lipschitz_k == 0.0);
}

namespace {

struct ProbePoint {
    double t, y1, y2, z1, z2, alpha;
};

std::vector<ProbePoint> probe_points(int count, std::uint64_t seed) {
    const RandomField field(seed, 200);
    std::vector<ProbePoint> pts(count);
    for (int i = 0; i < count; ++i) {
        const auto pi = static_cast<std::uint32_t>(i);
        pts[i] = {field.uniform(pi, 0, 0),
                  5.0 * (2.0 * field.uniform(pi, 1, 0) - 1.0),
                  5.0 * (2.0 * field.uniform(pi, 1, 1) - 1.0),
                  5.0 * (2.0 * field.uniform(pi, 2, 0) - 1.0),
                  5.0 * (2.0 * field.uniform(pi, 2, 1) - 1.0),
                  field.uniform(pi, 3, 0)};
    }
    return pts;
}

struct ObservedProperties {
    bool independent_of_y = true;
    bool positively_homogeneous = true;
    bool subadditive = true;
    bool convex = true;
    bool a5 = true;
};

ObservedProperties observe(const Generator& g, const std::vector<ProbePoint>& pts) {
    ObservedProperties obs;
    const double tol = 1e-9;
    for (const auto& p : pts) {
        if (std::abs(g(p.t, p.y1, p.z1) - g(p.t, p.y2, p.z1)) > tol) obs.independent_of_y = false;
        const double scale = 2.0 * p.alpha; // alpha in [0, 2)
        if (std::abs(g(p.t, scale * p.y1, scale * p.z1) - scale * g(p.t, p.y1, p.z1)) > tol)
            obs.positively_homogeneous = false;
        if (g(p.t, p.y1 + p.y2, p.z1 + p.z2) - g(p.t, p.y1, p.z1) - g(p.t, p.y2, p.z2) > tol)
            obs.subadditive = false;
        const double mix = g(p.t, p.alpha * p.y1 + (1 - p.alpha) * p.y2,
                             p.alpha * p.z1 + (1 - p.alpha) * p.z2);
        if (mix - p.alpha * g(p.t, p.y1, p.z1) - (1 - p.alpha) * g(p.t, p.y2, p.z2) > tol)
            obs.convex = false;
        if (std::abs(g(p.t, p.y1, 0.0)) > 1e-12) obs.a5 = false;
    }
    return obs;
}

} // namespace

TEST_CASE("flags agree with direct observation on 10^4 probes") {
    const auto pts = probe_points(10000, 77);
    for (const Generator& g :
         {zero_generator(), linear_generator(0.0, 1.0, 0.0), linear_generator(0.5, 1.0, 0.0),
          linear_generator(0.0, 1.0, 0.25), kappa_abs_z_generator(0.5), discount_generator(1.0),
          quadratic_z_generator(1.0)}) {
        CAPTURE(g.label);
        const auto obs = observe(g, pts);
        CHECK(obs.independent_of_y == g.flags.independent_of_y);
        CHECK(obs.positively_homogeneous == g.flags.positively_homogeneous);
        CHECK(obs.subadditive == g.flags.subadditive);
        CHECK(obs.convex == g.flags.convex_in_z);
        CHECK(obs.a5 == g.flags.satisfies_a5);
    }
}

TEST_CASE("audit A5 verdict matches the flag for every builtin") {
    for (const Generator& g :
         {zero_generator(), linear_generator(0.0, 1.0, 0.0), kappa_abs_z_generator(0.5),
          discount_generator(1.0), quadratic_z_generator(1.0)}) {
        CAPTURE(g.label);
        const auto rep = check_a_assumptions(g, 10000, 5);
        CHECK(rep.a5_pass == g.flags.satisfies_a5);
    }
    // Lipschitz-declared drivers pass A1; the quadratic driver is the gate demo.
    for (const Generator& g : {zero_generator(), linear_generator(0.0, 1.0, 0.0),
                               kappa_abs_z_generator(0.5), discount_generator(1.0)})
        CHECK(check_a_assumptions(g, 10000, 5).a1_pass);
}

TEST_CASE("audit: the quadratic driver is excluded by the Lipschitz gate") {
    const auto rep = check_a_assumptions(quadratic_z_generator(1.0), 10000, 5);
    CHECK_FALSE(rep.a1_pass);
    // sup |1 + 0.1 (z + z')| = 2 on the default |z| <= 5 box.
    CHECK(rep.max_lipschitz_ratio == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("positive homogeneity plus subadditivity implies the convexity probe") {
    const auto pts = probe_points(10000, 78);
    for (const Generator& g :
         {zero_generator(), linear_generator(0.0, 1.0, 0.0), kappa_abs_z_generator(0.5)}) {
        CAPTURE(g.label);
        REQUIRE(g.flags.positively_homogeneous);
        REQUIRE(g.flags.subadditive);
        CHECK(observe(g, pts).convex);
    }
}

TEST_CASE("time shift wraps the driver clock") {
    const Generator stepped = time_step_generator(0.5);
    const Generator shifted = shift_time(stepped, 0.5);
    CHECK(stepped(0.4, 0.0, 1.0) == 0.0);
    CHECK(shifted(0.0, 0.0, 1.0) == 1.0); // sees absolute time 0.5
    CHECK(shifted(0.2, 0.0, 1.0) == 1.0);
}
