#include <doctest.h>

#include <cmath>

#include "boltzlab/interpolation.hpp"

using namespace boltzlab;

namespace {

double gauss2(const double* v) { return std::exp(-0.5 * (v[0] * v[0] + 2 * v[1] * v[1]) + 0.3 * v[0]); }

double max_error(int n, InterpolationKind kind) {
    const auto g = PhaseGrid::homogeneous(2, n, 6.0);
    const Interpolant I(sample_field(gauss2, g), kind);
    double err = 0.0;
    for (int i = 0; i < 37; ++i)
        for (int j = 0; j < 29; ++j) {
            const double p[2] = {-2.3 + 0.131 * i, -1.9 + 0.127 * j};
            err = std::max(err, std::abs(I.value(p) - gauss2(p)));
        }
    return err;
}

}  // namespace

TEST_CASE("B-spline weights form a partition of unity and reproduce linears") {
    for (double t : {0.0, 0.25, 0.5, 0.9}) {
        double w[4], dw[4];
        bspline_weights(t, w);
        bspline_derivative_weights(t, dw);
        CHECK(w[0] + w[1] + w[2] + w[3] == doctest::Approx(1.0));
        CHECK(-w[0] + w[2] + 2 * w[3] == doctest::Approx(t));
        CHECK(dw[0] + dw[1] + dw[2] + dw[3] == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(-dw[0] + dw[2] + 2 * dw[3] == doctest::Approx(1.0));
    }
}

TEST_CASE("both interpolants reproduce the samples at the nodes") {
    const auto g = PhaseGrid::homogeneous(2, 15, 3.0);
    const auto f = sample_field(gauss2, g);
    for (auto kind : {InterpolationKind::multilinear, InterpolationKind::cubic_bspline}) {
        const Interpolant I(f, kind);
        double z[2];
        for (std::size_t i = 0; i < g.size(); ++i) {
            g.node_coords(i, z);
            CHECK(I.value(z) == doctest::Approx(f[i]).epsilon(1e-11));
        }
    }
}

TEST_CASE("multilinear is exact on bilinear data inside the box") {
    const auto g = PhaseGrid::homogeneous(2, 9, 2.0);
    const auto f = sample_field([](const double* v) { return 1 + 2 * v[0] - v[1] + 0.5 * v[0] * v[1]; }, g);
    const Interpolant I(f, InterpolationKind::multilinear);
    const double p[2] = {0.37, -1.21};
    CHECK(I.value(p) == doctest::Approx(1 + 0.74 + 1.21 - 0.5 * 0.37 * 1.21));
}

TEST_CASE("outside the box the field extends by zero") {
    const auto g = PhaseGrid::homogeneous(1, 9, 2.0);
    const auto f = sample_field([](const double*) { return 1.0; }, g);
    for (auto kind : {InterpolationKind::multilinear, InterpolationKind::cubic_bspline}) {
        const Interpolant I(f, kind);
        const double far = 9.5;
        CHECK(I.value(&far) == 0.0);
    }
}

TEST_CASE("cubic spline converges at fourth order, multilinear at second") {
    const double s0 = max_error(25, InterpolationKind::cubic_bspline);
    const double s1 = max_error(49, InterpolationKind::cubic_bspline);
    const double l0 = max_error(25, InterpolationKind::multilinear);
    const double l1 = max_error(49, InterpolationKind::multilinear);
    CHECK(s0 / s1 > 10.0);
    CHECK(l0 / l1 > 3.0);
    CHECK(l0 / l1 < 6.0);
    CHECK(s1 < l1);
}

TEST_CASE("spline gradient matches the analytic derivative") {
    const auto g = PhaseGrid::homogeneous(2, 61, 6.0);
    const Interpolant I(sample_field(gauss2, g), InterpolationKind::cubic_bspline);
    const double p[2] = {0.41, -0.77};
    double grad[2];
    const double val = I.value_and_gradient(p, grad);
    CHECK(val == doctest::Approx(gauss2(p)).epsilon(1e-4));
    CHECK(grad[0] == doctest::Approx((0.3 - p[0]) * gauss2(p)).epsilon(1e-3));
    CHECK(grad[1] == doctest::Approx(-2 * p[1] * gauss2(p)).epsilon(1e-3));
}

TEST_CASE("interpolation kind strings round trip") {
    for (auto k : {InterpolationKind::multilinear, InterpolationKind::cubic_bspline})
        CHECK(interpolation_from_string(to_string(k)) == k);
    CHECK_THROWS(interpolation_from_string("quintic"));
}
