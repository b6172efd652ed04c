#include <doctest.h>

#include <cmath>
#include <numbers>

#include "boltzlab/cli/experiments.hpp"
#include "boltzlab/diagnostics.hpp"
#include "boltzlab/quadrature.hpp"

using namespace boltzlab;

namespace {

constexpr double kPi = std::numbers::pi;

// H(p|G) over the disk |(x, v)| ≤ c in d = 1, in plain polar coordinates.
double polar_entropy(double s, double c) {
    const auto gr = gauss_legendre(64, 0.0, c);
    const auto gt = gauss_legendre(128, 0.0, 2 * kPi);
    double acc = 0.0;
    for (std::size_t i = 0; i < gr.nodes.size(); ++i)
        for (std::size_t j = 0; j < gt.nodes.size(); ++j) {
            const double r = gr.nodes[i], x = r * std::cos(gt.nodes[j]);
            const double p = 1.0 / (1.0 + std::pow(r, s));
            const double G = std::exp(-0.5 * x * x) / std::sqrt(2 * kPi);
            acc += gr.weights[i] * gt.weights[j] * r * (p * std::log(p / G) - p + G);
        }
    return acc;
}

}  // namespace

TEST_CASE("entropy_phi is nonnegative, zero at one and smooth across the series switch") {
    CHECK(entropy_phi(1.0) == 0.0);
    CHECK(entropy_phi(0.0) == 1.0);
    for (double r : {1e-12, 0.3, 0.999999, 1.000001, 2.0, 50.0}) CHECK(entropy_phi(r) >= 0.0);
    for (double u : {2e-5, 1e-4, 3e-4}) {
        const double exact = 0.5 * u * u - u * u * u / 6 + u * u * u * u / 12;
        CHECK(entropy_phi(1 + u) == doctest::Approx(exact).epsilon(1e-9));
    }
    CHECK(entropy_phi(1 + 1e-4 - 1e-15) == doctest::Approx(entropy_phi(1 + 1e-4 + 1e-15)).epsilon(1e-9));
}

TEST_CASE("relative entropy of two centred Gaussians is their KL divergence") {
    const auto g = PhaseGrid::homogeneous(1, 401, 12.0);
    const double s1 = 0.8, s2 = 1.3;
    const auto N = maxwellian_field(1.0, {0.0}, s1 * s1, g);
    const auto M = maxwellian_field(1.0, {0.0}, s2 * s2, g);
    CHECK(relative_entropy(N, M) == doctest::Approx(std::log(s2 / s1) + s1 * s1 / (2 * s2 * s2) - 0.5).epsilon(1e-9));
    CHECK(relative_entropy(M, M) == 0.0);
}

TEST_CASE("integrand is nonnegative with zeros and exact ties") {
    const auto g = PhaseGrid::inhomogeneous(1, 9, 3.0, 9, 3.0);
    const auto G = reference_gaussian(g);
    auto N = G;
    cli::Rng rng(3);
    for (std::size_t i = 0; i < N.size(); ++i) {
        const double u = rng.uniform();
        N[i] = u < 0.2 ? 0.0 : (u < 0.4 ? G[i] : G[i] * std::exp(8 * (rng.uniform() - 0.5)));
    }
    const auto I = relative_entropy_integrand(N, G);
    for (std::size_t i = 0; i < I.size(); ++i) {
        CHECK(I[i] >= 0.0);
        if (N[i] == 0.0) CHECK(I[i] == G[i]);
        if (N[i] == G[i]) CHECK(I[i] == 0.0);
    }
    CHECK(relative_entropy(G, G) == 0.0);
}

TEST_CASE("reference Gaussian is constant in v and normalised in x") {
    const auto g = PhaseGrid::inhomogeneous(2, 5, 2.0, 3, 1.0);
    const double a[4] = {0.5, -0.5, 0.3, -1.0}, b[4] = {0.5, -0.5, 1.0, 0.0};
    CHECK(reference_gaussian_value(a, 2) == reference_gaussian_value(b, 2));
    CHECK(reference_gaussian_value(a, 2) == doctest::Approx(std::exp(-0.25) / (2 * kPi)));
}

TEST_CASE("scan matches independent polar quadrature and the grid sum") {
    EntropyScanOptions opts;
    opts.d = 1;
    const auto scan = entropy_divergence_scan(7.0, {1.0, 2.0, 3.0}, opts);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(scan.values[i] == doctest::Approx(polar_entropy(7.0, scan.cutoffs[i])).epsilon(1e-8));

    const auto g = PhaseGrid::inhomogeneous(1, 401, 4.0, 401, 4.0);
    const auto p = sample_field([](const double* z) { return 1.0 / (1.0 + std::pow(std::hypot(z[0], z[1]), 7.0)); }, g);
    const double grid = relative_entropy(p, reference_gaussian(g), 2.0);
    CHECK(grid == doctest::Approx(scan.values[1]).epsilon(2e-2));
}

TEST_CASE("entropy grows without bound at s = 7 in d = 3") {
    const auto scan = entropy_divergence_scan(7.0, {5, 10, 20, 40});
    CHECK(scan.increasing);
    CHECK(scan.increments_increasing);
    for (std::size_t i = 1; i < scan.values.size(); ++i) CHECK(scan.values[i] > scan.values[i - 1]);
    EntropyScanOptions ref;
    ref.reference_profile = true;
    const auto zero = entropy_divergence_scan(7.0, {5, 10, 20, 40}, ref);
    for (double v : zero.values) CHECK(v == 0.0);
    CHECK_THROWS(entropy_divergence_scan(6.0, {5.0}));
    CHECK_THROWS(entropy_divergence_scan(7.0, {5.0, 4.0}));
}

TEST_CASE("entropy production trace is nonnegative along a relaxing solution") {
    const auto g = PhaseGrid::homogeneous(2, 17, 6.0);
    const auto cfg = default_collision_config(2);
    std::vector<DensityField> slices;
    for (double eps : {0.5, 0.4, 0.3}) slices.push_back(cli::perturbed_maxwellian(g, eps));
    for (std::size_t i = 0; i < slices.size(); ++i) slices[i].time = 0.1 * i;
    const auto tr = entropy_production_trace(slices, cfg);
    CHECK(tr.nonnegative);
    CHECK(tr.cumulative_nondecreasing);
    CHECK(tr.min_rate > 0.0);
    CHECK(tr.cumulative.back() > 0.0);
}
