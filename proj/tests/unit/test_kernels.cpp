#include <doctest.h>

#include <cmath>
#include <numbers>

#include "boltzlab/bounds.hpp"
#include "boltzlab/cli/experiments.hpp"
#include "boltzlab/kernels.hpp"
#include "boltzlab/quadrature.hpp"

using namespace boltzlab;

namespace {

// Bivariate normal density written out from the mean and covariance of the
// process started at (x, v).
double kolmogorov_reference(double tau, double z0, double z1, double x, double v, double nu) {
    const double a = 2 * nu * tau + 2 * nu * tau * tau * tau / 3, b = nu * tau * tau, c = 2 * nu * tau;
    const double det = a * c - b * b;
    const double dx = z0 - x - v * tau, dv = z1 - v;
    const double q = (c * dx * dx - 2 * b * dx * dv + a * dv * dv) / det;
    return std::exp(-0.5 * q) / (2 * std::numbers::pi * std::sqrt(det));
}

}  // namespace

TEST_CASE("heat kernel closed form and normalisation") {
    const HeatKernelSpec spec{0.3, 2};
    const double z[2] = {0.4, -0.1}, y[2] = {0.0, 0.2};
    const double tau = 0.7;
    const double r2 = 0.16 + 0.09;
    CHECK(heat_kernel(1.2, z, 0.5, y, spec) ==
          doctest::Approx(std::exp(-r2 / (4 * 0.3 * tau)) / (4 * std::numbers::pi * 0.3 * tau)));
    const HeatKernelSpec s1{0.5, 1};
    const double y0 = 0.3;
    const double mass = integrate_gl([&](double x) { return heat_kernel(1.0, &x, 0.0, &y0, s1); }, -10, 10, 40);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Kolmogorov oracle matches the bivariate normal and its moments") {
    const double nu = 0.2, tau = 0.8;
    const double y[2] = {0.3, -0.6};
    for (double z0 : {-1.0, 0.0, 0.7})
        for (double z1 : {-0.9, 0.1}) {
            const double z[2] = {z0, z1};
            CHECK(kolmogorov_oracle(tau, z, 0.0, y, nu, 1) ==
                  doctest::Approx(kolmogorov_reference(tau, z0, z1, y[0], y[1], nu)).epsilon(1e-13));
        }
    const auto m = kolmogorov_moments(tau, nu);
    CHECK(m.var_x == doctest::Approx(2 * nu * tau + 2 * nu * std::pow(tau, 3) / 3));
    CHECK(m.cov_xv == doctest::Approx(nu * tau * tau));
    CHECK(m.var_v == doctest::Approx(2 * nu * tau));

    const auto gl = gauss_legendre(80, -6.0, 6.0);
    double mass = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
            const double z[2] = {gl.nodes[i], gl.nodes[j]};
            mass += gl.weights[i] * gl.weights[j] * kolmogorov_oracle(tau, z, 0.0, y, nu, 1);
        }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("oracle satisfies the forward Kolmogorov equation") {
    const double nu = 0.1, t = 0.5, s = 0.0, h = 1e-3;
    const double y[2] = {0.1, 0.4};
    const double z[2] = {0.35, 0.2};
    auto G = [&](double tt, double a, double b) {
        const double p[2] = {a, b};
        return kolmogorov_oracle(tt, p, s, y, nu, 1);
    };
    const double dt = (G(t + h, z[0], z[1]) - G(t - h, z[0], z[1])) / (2 * h);
    const double dx = (G(t, z[0] + h, z[1]) - G(t, z[0] - h, z[1])) / (2 * h);
    const double c = G(t, z[0], z[1]);
    const double dxx = (G(t, z[0] + h, z[1]) - 2 * c + G(t, z[0] - h, z[1])) / (h * h);
    const double dvv = (G(t, z[0], z[1] + h) - 2 * c + G(t, z[0], z[1] - h)) / (h * h);
    const double rhs = nu * (dxx + dvv) - z[1] * dx;
    CHECK(dt == doctest::Approx(rhs).epsilon(1e-4).scale(std::abs(dt)));
}

TEST_CASE("Euler–Maruyama paths reproduce the oracle moments within three sigma") {
    const double nu = 0.1, tau = 0.2;
    const int paths = 100000, steps = 400;
    const double dt = tau / steps, amp = std::sqrt(2 * nu * dt);
    const double x0 = 0.0, v0 = 0.5;
    cli::Rng rng(2024);
    double sx = 0, sv = 0, sxx = 0, sxv = 0, svv = 0;
    for (int p = 0; p < paths; ++p) {
        double x = x0, v = v0;
        for (int k = 0; k < steps; ++k) {
            const double dwv = amp * rng.normal();
            x += (v + 0.5 * dwv) * dt + amp * rng.normal();
            v += dwv;
        }
        sx += x;
        sv += v;
        sxx += x * x;
        sxv += x * v;
        svv += v * v;
    }
    const double N = paths;
    const double mx = sx / N, mv = sv / N;
    const double vx = sxx / N - mx * mx, cxv = sxv / N - mx * mv, vv = svv / N - mv * mv;
    const auto m = kolmogorov_moments(tau, nu);
    CHECK(std::abs(mx - (x0 + v0 * tau)) <= 3 * std::sqrt(m.var_x / N));
    CHECK(std::abs(mv - v0) <= 3 * std::sqrt(m.var_v / N));
    CHECK(std::abs(vx - m.var_x) <= 3 * m.var_x * std::sqrt(2 / N));
    CHECK(std::abs(vv - m.var_v) <= 3 * m.var_v * std::sqrt(2 / N));
    CHECK(std::abs(cxv - m.cov_xv) <= 3 * std::sqrt((m.var_x * m.var_v + m.cov_xv * m.cov_xv) / N));
}

TEST_CASE("adjoint identities hold for heat and oracle kernels") {
    std::vector<KernelProbe> probes;
    cli::Rng rng(9);
    for (int i = 0; i < 20; ++i) {
        KernelProbe p;
        p.s = 0.1 * rng.uniform();
        p.t = p.s + 0.05 + 0.3 * rng.uniform();
        for (int a = 0; a < 4; ++a) {
            p.z.push_back(rng.normal() * 0.5);
            p.y.push_back(rng.normal() * 0.5);
        }
        probes.push_back(p);
    }
    const auto heat = adjoint_check(heat_evaluator(0.1, 4), probes);
    CHECK(heat.max_defect <= 1e-12);
    const auto orc = adjoint_check(oracle_evaluator(0.1, 2), probes);
    double rel = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i)
        rel = std::max(rel, std::abs(orc.forward[i] - orc.adjoint[i]) / std::abs(orc.forward[i]));
    CHECK(rel <= 1e-12);
}

TEST_CASE("heat kernel envelope fits with and without derivatives") {
    const double nu = 0.1;
    std::vector<KernelProbe> probes;
    for (double tau : {0.01, 0.02, 0.05})
        for (double off : {-1.0, 2.0, 3.0}) {
            KernelProbe p;
            p.s = 0.0;
            p.t = tau;
            p.y = {0.0, 0.0};
            const double sd = std::sqrt(nu * tau);
            p.z = {off * sd, 0.5 * off * sd};
            probes.push_back(p);
        }
    BoundFitOptions opts;
    opts.nu = nu;
    opts.d = 1;
    opts.calibration_speed = 10.0;
    const auto K = heat_evaluator(nu, 2).forward;
    for (int alpha : {0, 1}) {
        const auto fit = apriori_bound_fit(K, alpha, probes, opts);
        CHECK(fit.success);
        CHECK(fit.lambda_fit > 0.0);
        CHECK(fit.lambda_fit <= 0.25 + 1e-9);
        for (const auto& p : probes)
            CHECK(kernel_derivative_magnitude(K, alpha, p, nu) <= envelope_value(fit, p, nu, 1) * (1 + 1e-9));
    }
    const double slope = time_exponent_fit(K, 0, {0.01, 0.02, 0.04}, {0.0, 0.0}, {0.5, 0.5}, nu);
    CHECK(slope == doctest::Approx(-1.0).epsilon(1e-6));
}
