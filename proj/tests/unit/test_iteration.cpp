#include <doctest.h>

#include <cmath>
#include <numbers>

#include "boltzlab/cli/experiments.hpp"
#include "boltzlab/iteration.hpp"

using namespace boltzlab;

namespace {

constexpr double kPi = std::numbers::pi;

double std_gauss(const double* z) { return std::exp(-0.5 * (z[0] * z[0] + z[1] * z[1])) / (2 * kPi); }

// Exact solution of ∂_t F = νΔF − v∂_xF in d = 1 from the standard Gaussian.
double free_solution(double x, double v, double nu, double tau, double* grad = nullptr) {
    const double a = 1 + 2 * nu * tau + 2 * nu * tau * tau * tau / 3, b = -nu * tau * tau, c = 1 + 2 * nu * tau;
    const double det = a * c - b * b;
    const double w0 = x - v * tau, w1 = v;
    const double p0 = (c * w0 - b * w1) / det, p1 = (a * w1 - b * w0) / det;
    const double val = std::exp(-0.5 * (w0 * p0 + w1 * p1)) / (2 * kPi * std::sqrt(det));
    if (grad) {
        grad[0] = -p0 * val;
        grad[1] = (tau * p0 - p1) * val;
    }
    return val;
}

LocalSolveConfig homogeneous_cfg(int d) {
    LocalSolveConfig c;
    c.collision = default_collision_config(d);
    c.time_panels = 4;
    c.tol = 1e-10;
    return c;
}

}  // namespace

TEST_CASE("heat-only homogeneous solve reproduces the widening Gaussian") {
    const auto g = PhaseGrid::homogeneous(2, 41, 8.0);
    const auto F0 = maxwellian_field(1.0, {0.0, 0.0}, 1.0, g);
    auto cfg = homogeneous_cfg(2);
    cfg.collisions = false;
    cfg.nu = 0.05;
    cfg.delta = 0.5;
    const auto r = solve_local(F0, cfg);
    CHECK(r.trace.converged);
    const auto ref = maxwellian_field(1.0, {0.0, 0.0}, 1.0 + 2 * cfg.nu * cfg.delta, g);
    double err = 0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(r.final()[i] - ref[i]));
    CHECK(err <= 1e-3 * max_abs(ref));
    CHECK(std::isnan(r.trace.records.front().ratio));
}

TEST_CASE("a Maxwellian stays a Maxwellian under collisions and weak diffusion") {
    const auto g = PhaseGrid::homogeneous(2, 17, 6.0);
    const auto F0 = maxwellian_field(1.0, {0.0, 0.0}, 1.0, g);
    auto cfg = homogeneous_cfg(2);
    cfg.nu = 1e-3;
    cfg.delta = 0.0625;
    const auto r = solve_local(F0, cfg);
    CHECK(r.trace.converged);
    const auto ref = maxwellian_field(1.0, {0.0, 0.0}, 1.0 + 2 * cfg.nu * cfg.delta, g);
    double err = 0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(r.final()[i] - ref[i]));
    CHECK(err <= 1e-2 * max_abs(ref));
    CHECK(fixed_point_residual(r, F0, cfg) <= 1e-8);
}

TEST_CASE("free transport solves match the exact Kolmogorov solution") {
    const auto g = PhaseGrid::inhomogeneous(1, 49, 6.0, 49, 6.0);
    const auto F0 = sample_field(std_gauss, g);
    const double nu = 0.05, delta = 0.4;
    for (auto rep : {Representation::parametrix, Representation::gaussian_split}) {
        LocalSolveConfig cfg;
        cfg.nu = nu;
        cfg.delta = delta;
        cfg.representation = rep;
        cfg.time_panels = rep == Representation::parametrix ? 2 : 16;
        cfg.tol = 1e-9;
        cfg.max_iter = 60;
        const auto r = solve_local(F0, cfg);
        CHECK(r.trace.converged);
        double err = 0, z[2];
        for (std::size_t i = 0; i < g.size(); ++i) {
            g.node_coords(i, z);
            err = std::max(err, std::abs(r.final()[i] - free_solution(z[0], z[1], nu, delta)));
        }
        CHECK(err <= (rep == Representation::parametrix ? 1e-4 : 2e-2) * max_abs(F0));
        if (rep == Representation::parametrix) {
            const auto dx = derivative_field(r, F0, cfg, 0);
            const auto dv = derivative_field(r, F0, cfg, 1);
            double gerr = 0, grad[2];
            for (std::size_t i = 0; i < g.size(); ++i) {
                g.node_coords(i, z);
                free_solution(z[0], z[1], nu, delta, grad);
                gerr = std::max({gerr, std::abs(dx[i] - grad[0]), std::abs(dv[i] - grad[1])});
            }
            CHECK(gerr <= 1e-3 * max_abs(F0));
        }
    }
}

TEST_CASE("collisional Picard iteration contracts and Δ halving stops at the target") {
    const auto g = PhaseGrid::homogeneous(2, 13, 5.0);
    const auto F0 = cli::bump_field(g);
    auto cfg = homogeneous_cfg(2);
    cfg.nu = 1e-2;
    cfg.delta = 1.0;
    cfg.max_iter = 30;
    cfg.tol = 1e-9;
    const auto ds = select_delta(F0, cfg, 0.5, 8);
    REQUIRE(ds.found);
    CHECK(ds.result.trace.measured_ratio <= 0.5);
    for (std::size_t i = 1; i < ds.deltas.size(); ++i) CHECK(ds.deltas[i] == ds.deltas[i - 1] / 2);
    CHECK(ds.delta == ds.deltas.back());
    cfg.delta = ds.delta;
    CHECK(fixed_point_residual(ds.result, F0, cfg) <= 1e-8);

    // One more step from the fixed point changes nothing beyond tolerance.
    const auto next = picard_step(ds.result.slices, F0, cfg);
    double d = 0;
    for (std::size_t i = 0; i < next.back().size(); ++i) d = std::max(d, std::abs(next.back()[i] - ds.result.final()[i]));
    CHECK(d <= 1e-8 * max_abs(F0));
}

TEST_CASE("viscosity sweep against the oracle converges as ν → 0") {
    const auto g = PhaseGrid::inhomogeneous(1, 49, 6.0, 49, 6.0);
    const auto F0 = sample_field(std_gauss, g);
    LocalSolveConfig cfg;
    cfg.time_panels = 2;
    const double delta = 0.4;
    const PointFunction oracle = [&](const double* z) {
        const double y[2] = {z[0] - z[1] * delta, z[1]};
        return std_gauss(y);
    };
    const auto rep = viscosity_sweep(F0, delta, {1e-1, 1e-2, 1e-3}, cfg, &oracle);
    REQUIRE(rep.entries.size() == 3);
    CHECK(rep.visc_monotone);
    CHECK(rep.cauchy);
    CHECK(rep.visc_exponent == doctest::Approx(1.0).epsilon(0.05));
    CHECK(rep.entries[0].oracle_error > rep.entries[2].oracle_error);
    CHECK(rep.entries[2].oracle_error <= 2e-3);
    CHECK_THROWS(viscosity_sweep(F0, delta, {1e-2, 1e-1}, cfg, nullptr));
}

TEST_CASE("Levy kernel configuration is validated") {
    const auto g = PhaseGrid::inhomogeneous(1, 9, 2.0, 9, 2.0);
    const auto F0 = sample_field(std_gauss, g);
    LocalSolveConfig cfg;
    cfg.kernel = KernelChoice::levy;
    cfg.nu = 0.1;
    cfg.delta = 1.0;
    CHECK_THROWS_WITH(solve_local(F0, cfg), doctest::Contains("validity"));
    cfg.delta = 0.1;
    cfg.representation = Representation::gaussian_split;
    CHECK_THROWS(solve_local(F0, cfg));
    const auto h = PhaseGrid::homogeneous(2, 9, 3.0);
    cfg.representation = Representation::parametrix;
    CHECK_THROWS(solve_local(maxwellian_field(1.0, {0.0, 0.0}, 1.0, h), cfg));
}

TEST_CASE("enum strings round trip") {
    for (auto r : {Representation::parametrix, Representation::gaussian_split, Representation::transport_exact})
        CHECK(representation_from_string(to_string(r)) == r);
    for (auto k : {KernelChoice::oracle, KernelChoice::levy}) CHECK(kernel_choice_from_string(to_string(k)) == k);
    CHECK_THROWS(representation_from_string("spectral"));
}
