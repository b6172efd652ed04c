#include <doctest.h>

#include <cmath>
#include <numbers>

#include "boltzlab/cli/experiments.hpp"
#include "boltzlab/kernels.hpp"
#include "boltzlab/levy.hpp"

using namespace boltzlab;

namespace {

// Density of dX = εV dt + √(2ν)dW_x, dV = √(2ν)dW_v in d = 1, written out
// from its mean and covariance.
double drifted_density(double eps, double tau, const double* z, const double* y, double nu) {
    const double a = 2 * nu * tau + 2 * eps * eps * nu * tau * tau * tau / 3, b = eps * nu * tau * tau, c = 2 * nu * tau;
    const double det = a * c - b * b;
    const double dx = z[0] - y[0] - eps * y[1] * tau, dv = z[1] - y[1];
    const double q = (c * dx * dx - 2 * b * dx * dv + a * dv * dv) / det;
    return std::exp(-0.5 * q) / (2 * std::numbers::pi * std::sqrt(det));
}

}  // namespace

TEST_CASE("order zero is the phase-space heat kernel") {
    const LevyKernel K0(0, 0.1, 1);
    const double z[2] = {0.2, 0.3}, y[2] = {0.0, -0.1};
    CHECK(K0.value(0.4, z, 0.1, y) == doctest::Approx(heat_kernel(0.4, z, 0.1, y, {0.1, 2})).epsilon(1e-14));
}

TEST_CASE("L_1 is v·∇_x G") {
    const double nu = 0.2, t = 0.3, s = 0.0;
    const double z[2] = {0.25, 0.7}, y[2] = {-0.05, 0.1};
    const HeatKernelSpec spec{nu, 2};
    const double h = 1e-5;
    const double zp[2] = {z[0] + h, z[1]}, zm[2] = {z[0] - h, z[1]};
    const double fd = z[1] * (heat_kernel(t, zp, s, y, spec) - heat_kernel(t, zm, s, y, spec)) / (2 * h);
    CHECK(levy_term(1, t, z, s, y, nu, 1) == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("convolved terms are the ε-Taylor coefficients of the drifted density") {
    const double nu = 0.1, tau = 0.3, e = 1e-3;
    const LevyKernel K(3, nu, 1, {12, 7, 1e-6, false, 1.0});
    for (auto [zx, zv] : {std::pair{0.05, 0.2}, {-0.1, 0.4}, {0.2, -0.3}}) {
        const double y[2] = {0.0, 0.3}, z[2] = {zx, zv};
        const double f0 = drifted_density(0.0, tau, z, y, nu);
        const double fp = drifted_density(e, tau, z, y, nu), fm = drifted_density(-e, tau, z, y, nu);
        const double d1 = (fp - fm) / (2 * e), d2 = (fp - 2 * f0 + fm) / (e * e);
        CHECK(-K.convolved_term(1, tau, z, 0.0, y) == doctest::Approx(d1).epsilon(1e-5).scale(f0));
        CHECK(K.convolved_term(2, tau, z, 0.0, y) == doctest::Approx(0.5 * d2).epsilon(1e-4).scale(f0));
    }
}

TEST_CASE("L_2 agrees with a Monte-Carlo bridge estimate") {
    const double nu = 0.15, t = 0.4, s = 0.0;
    const double z[2] = {0.3, 0.5}, y[2] = {0.0, 0.2};
    auto ell1 = [&](double ta, const double* za, double sa, const double* ya) {
        return -za[1] * (za[0] - ya[0]) / (2 * nu * (ta - sa));
    };
    cli::Rng rng(77);
    const int N = 400000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < N; ++i) {
        const double u = rng.uniform();
        const double lam = std::pow(std::sin(0.5 * std::numbers::pi * u), 2);
        const double sig = s + lam * (t - s);
        const double sd = std::sqrt(2 * nu * lam * (1 - lam) * (t - s));
        double zeta[2];
        for (int a = 0; a < 2; ++a) zeta[a] = y[a] + lam * (z[a] - y[a]) + sd * rng.normal();
        const double inv_p = std::numbers::pi * std::sqrt((sig - s) * (t - sig));
        const double x = ell1(t, z, sig, zeta) * ell1(sig, zeta, s, y) * inv_p;
        sum += x;
        sum2 += x * x;
    }
    const double G = heat_kernel(t, z, s, y, {nu, 2});
    const double mean = G * sum / N;
    const double se = G * std::sqrt((sum2 / N - (sum / N) * (sum / N)) / N);
    const double L2 = levy_term(2, t, z, s, y, nu, 1, {16, 8, 1e-6, false, 1.0});
    CHECK(std::abs(L2 - mean) <= 4 * se);
}

TEST_CASE("k-th term scales as drift^k and vanishes without drift") {
    const double z[2] = {0.1, 0.4}, y[2] = {0.0, 0.1};
    const LevyKernel a(2, 0.1, 1, {8, 5, 1e-6, false, 1.0}), b(2, 0.1, 1, {8, 5, 1e-6, false, 0.5}),
        c(2, 0.1, 1, {8, 5, 1e-6, false, 0.0});
    for (int k = 1; k <= 2; ++k) {
        CHECK(b.convolved_term(k, 0.2, z, 0.0, y) == doctest::Approx(std::pow(0.5, k) * a.convolved_term(k, 0.2, z, 0.0, y)));
        CHECK(c.convolved_term(k, 0.2, z, 0.0, y) == 0.0);
    }
}

TEST_CASE("order three approximates the oracle within five percent for small ν(t−s)") {
    const double nu = 0.1;
    const LevyKernel K(3, nu, 1);
    cli::Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const double tau = 0.05 + 0.45 * rng.uniform();
        const double y[2] = {0.0, 1.4 * rng.uniform() - 0.7};
        const double sd = std::sqrt(2 * nu * tau);
        const double z[2] = {y[0] + y[1] * tau + 0.5 * sd * rng.normal(), y[1] + 0.5 * sd * rng.normal()};
        const double o = kolmogorov_oracle(tau, z, 0.0, y, nu, 1);
        CHECK(std::abs(K.value(tau, z, 0.0, y) - o) <= 0.05 * o);
    }
}

TEST_CASE("partial sums end at the full value and the verify pass flags nothing on easy probes") {
    const LevyKernel K(3, 0.1, 1, {8, 5, 1e-3, true, 1.0});
    const double z[2] = {0.05, 0.3}, y[2] = {0.0, 0.3};
    bool flagged = false;
    const auto S = K.partial_sums(0.2, z, 0.0, y, &flagged);
    REQUIRE(S.size() == 4);
    CHECK(S.back() == doctest::Approx(K.value(0.2, z, 0.0, y)));
    CHECK_FALSE(flagged);
    CHECK_THROWS(LevyKernel(-1, 0.1, 1));
    CHECK_THROWS(LevyKernel(2, 0.0, 1));
}
