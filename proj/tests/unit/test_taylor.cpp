#include <doctest.h>

#include <cmath>

#include "boltzlab/cli/experiments.hpp"
#include "boltzlab/collision.hpp"

using namespace boltzlab;

namespace {

CollisionConfig config2(int nodes) {
    CollisionConfig c;
    c.sphere = sphere_quadrature(2, nodes);
    return c;
}

}  // namespace

TEST_CASE("W components sum to the Taylor form") {
    const auto g = PhaseGrid::homogeneous(2, 13, 5.0);
    const auto cfg = config2(8);
    const auto F = cli::bump_field(g);
    const auto W = w_decomposition(F.values.data(), g, cfg, 4);
    const auto T = taylor_form_collision(F.values.data(), g, cfg, 4);
    REQUIRE(W.size() == 4);
    const double scale = max_abs(T);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double s = 0.0;
        for (const auto& w : W) s += w[i];
        CHECK(s == doctest::Approx(T[i]).epsilon(1e-12).scale(scale));
    }
}

TEST_CASE("Taylor form reproduces the direct operator on smooth data") {
    const auto g = PhaseGrid::homogeneous(2, 33, 5.0);
    const auto cfg = config2(16);
    const auto F = cli::bump_field(g);
    const auto Q = collision_operator(F, cfg);
    const auto T = taylor_form_collision(F.values.data(), g, cfg, 4);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(Q[i] - T[i]));
    CHECK(err <= 0.05 * max_abs(Q));
}

TEST_CASE("Taylor form of a Maxwellian is small against its loss") {
    const auto cfg = config2(16);
    const auto defect = [&](int n) {
        const auto g = PhaseGrid::homogeneous(2, n, 6.0);
        const auto M = maxwellian_field(1.0, {0.0, 0.0}, 1.0, g);
        const auto T = taylor_form_collision(M.values.data(), g, cfg, 4);
        return max_abs(T) / max_abs(collision_loss(M.values.data(), g, cfg));
    };
    const double coarse = defect(17), fine = defect(25);
    CHECK(fine <= 0.02);
    CHECK(fine < 0.5 * coarse);
}

TEST_CASE("a radially symmetric field gives W components related by the axis swap") {
    const int n = 13;
    const auto g = PhaseGrid::homogeneous(2, n, 5.0);
    const auto cfg = config2(16);
    const auto F = sample_field([](const double* v) { return std::exp(-0.5 * (v[0] * v[0] + v[1] * v[1])); }, g);
    const auto W = w_decomposition(F.values.data(), g, cfg, 4);
    const double scale = max_abs(W[0]);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const std::size_t a = static_cast<std::size_t>(i) * n + j, b = static_cast<std::size_t>(j) * n + i;
            CHECK(W[0][a] == doctest::Approx(W[1][b]).epsilon(1e-10).scale(scale));
            CHECK(W[2][a] == doctest::Approx(W[3][b]).epsilon(1e-10).scale(scale));
        }
}

TEST_CASE("too few θ nodes are rejected") {
    const auto g = PhaseGrid::homogeneous(2, 9, 4.0);
    const auto F = cli::bump_field(g);
    CHECK_THROWS(taylor_form_collision(F.values.data(), g, config2(8), 1));
}
