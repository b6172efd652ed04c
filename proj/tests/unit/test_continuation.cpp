#include <doctest.h>

#include <cmath>

#include "boltzlab/cli/experiments.hpp"
#include "boltzlab/continuation.hpp"

using namespace boltzlab;

TEST_CASE("time dilation, its inverse and its derivative") {
    for (double dt : {0.0, 0.1, 0.5, 0.9}) {
        const auto [s, ds] = dilate_time(2.0 + dt, 2.0);
        CHECK(undilate_time(s) == doctest::Approx(dt).epsilon(1e-14));
        const double h = 1e-6;
        if (dt > 0.0) {
            const double fd = (dilate_time(2.0 + dt + h, 2.0).first - dilate_time(2.0 + dt - h, 2.0).first) / (2 * h);
            CHECK(ds == doctest::Approx(fd).epsilon(1e-6));
        }
    }
    CHECK(dilated_length(0.6) == doctest::Approx(0.75));
    CHECK_THROWS(dilate_time(1.0, 0.0));
    CHECK_THROWS(undilate_time(-0.1));
}

TEST_CASE("U transform round trips") {
    const auto g = PhaseGrid::homogeneous(2, 9, 3.0);
    auto F = cli::bump_field(g);
    const auto U = transform_to_U(F, 1.3, 1.0);
    CHECK(U.time == doctest::Approx(dilate_time(1.3, 1.0).first));
    CHECK(U[40] == doctest::Approx(F[40] / 2.3));
    const auto back = transform_back(U, 1.0);
    CHECK(back.time == doctest::Approx(1.3));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[i] == doctest::Approx(F[i]).epsilon(1e-14));
}

TEST_CASE("step rule") {
    ContinuationConfig c;
    c.T = 2.0;
    c.delta0 = 1.0 / 9.0;
    CHECK_NOTHROW(validate_continuation(c));
    c.delta0 = 0.12;
    CHECK_THROWS_WITH(validate_continuation(c), doctest::Contains("step rule"));
    c.delta0 = 0.0;
    CHECK_THROWS(validate_continuation(c));
}

TEST_CASE("damped schedule samples c = (1−Δt²)^{3/2} and κ = c/(1+t)") {
    const auto sc = damped_schedule(1.0, 0.2, 4);
    REQUIRE(sc.panel_c.size() == 4);
    REQUIRE(sc.node_beta.size() == 5);
    const double ds = dilated_length(0.2) / 4;
    const double dt = undilate_time(1.5 * ds);
    CHECK(sc.panel_c[1] == doctest::Approx(std::pow(1 - dt * dt, 1.5)));
    CHECK(sc.panel_kappa[1] == doctest::Approx(sc.panel_c[1] / (2.0 + dt)));
    CHECK(sc.node_c[0] == doctest::Approx(1.0));
    CHECK(sc.node_beta[0] == doctest::Approx(2.0));
}

TEST_CASE("damped continuation of the pure heat flow keeps F equal to the heat solution") {
    const auto g = PhaseGrid::homogeneous(2, 41, 8.0);
    const auto F0 = maxwellian_field(1.0, {0.0, 0.0}, 1.0, g);
    ContinuationConfig cfg;
    cfg.T = 1.0;
    cfg.delta0 = 0.25;
    cfg.local.nu = 0.05;
    cfg.local.collisions = false;
    cfg.local.time_panels = 16;
    cfg.local.collision = default_collision_config(2);
    const auto rep = continue_global(F0, cfg);
    CHECK(rep.success);
    CHECK(rep.checkpoints.size() == 1 + 4 * 16);
    CHECK(rep.checkpoints.back().t == doctest::Approx(1.0));
    for (const auto& c : rep.checkpoints) {
        const auto ref = maxwellian_field(1.0, {0.0, 0.0}, 1.0 + 2 * cfg.local.nu * c.t, g);
        CHECK(c.norm == doctest::Approx(weighted_sup_norm(ref, cfg.local.s - 1.0, true)).epsilon(2e-3));
        CHECK(c.positive);
        CHECK(c.pass);
    }
}

TEST_CASE("collisional continuation respects the linear bound") {
    const auto g = PhaseGrid::homogeneous(2, 25, 6.0);
    const auto F0 = cli::bump_field(g);
    ContinuationConfig cfg;
    cfg.T = 4.0 / 9.0;
    cfg.delta0 = 1.0 / 9.0;
    cfg.local.nu = 1e-2;
    cfg.local.time_panels = 4;
    cfg.local.tol = 1e-9;
    cfg.local.max_iter = 80;
    cfg.local.collision = default_collision_config(2);
    const auto rep = continue_global(F0, cfg);
    INFO(rep.message);
    CHECK(rep.success);
    CHECK(rep.C == doctest::Approx(std::max(1.0, 2 * weighted_sup_norm(F0, cfg.local.s - 1.0, true))));
    for (const auto& c : rep.checkpoints) CHECK(c.norm <= c.bound);
    for (double m : rep.step_margins) CHECK(m >= 0.0);
}

TEST_CASE("positivity monitor reports the minimum") {
    const auto g = PhaseGrid::homogeneous(1, 5, 1.0);
    DensityField F(g);
    F.values = {1, 0.5, -1e-8, 0.2, 0.0};
    const auto [m, ok] = positivity_monitor(F, 1e-6);
    CHECK(m == -1e-8);
    CHECK(ok);
    CHECK_FALSE(positivity_monitor(F, 1e-9).second);
}
