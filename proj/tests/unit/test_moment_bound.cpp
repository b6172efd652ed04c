#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "boltzlab/moment_bound.hpp"

using namespace boltzlab;

namespace {

template <class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// 1/R_k = 5·2^{k−1}·Π_{j<k}(5+2j).
unsigned __int128 inverse_r(int k) {
    unsigned __int128 v = 5;
    for (int j = 1; j < k; ++j) v *= 2 * (5 + 2 * j);
    return v;
}

unsigned __int128 bound_denominator(int k) {
    unsigned __int128 v = 1;
    for (int i = 0; i < k; ++i) v *= 4;
    for (int i = 2; i <= k + 1; ++i) v *= i;
    return v;
}

}  // namespace

TEST_CASE("R_1 = 1/5, R_2 = 1/70 and the closed product form") {
    const auto R = r_coefficients(12);
    CHECK(R[0].str() == "1/5");
    CHECK(R[1].str() == "1/70");
    CHECK(R[2].str() == "1/1260");
    for (int k = 1; k <= 12; ++k) {
        CHECK(R[k - 1].num == 1);
        CHECK(static_cast<unsigned __int128>(R[k - 1].den) == inverse_r(k));
    }
}

TEST_CASE("the factorial bound on R_k fails below k = 6 and holds from there") {
    const auto R = r_coefficients(12);
    for (int k = 1; k <= 12; ++k) {
        const bool expected = bound_denominator(k) < inverse_r(k);
        CHECK(r_coefficient_bound_holds(R[k - 1], k) == expected);
        CHECK(expected == (k >= 6));
    }
}

TEST_CASE("128-bit overflow is reported") {
    CHECK_NOTHROW(r_coefficients(23));
    CHECK_THROWS_AS(r_coefficients(24), std::overflow_error);
}

TEST_CASE("boundary integral matches direct quadrature") {
    for (int k : {1, 2, 5, 9})
        for (double d0 : {0.05, 0.2}) {
            const auto f = [&](double s) {
                return s <= 0 ? 0.0 : std::pow(s, -k) * std::pow(4 * std::numbers::pi * s, -1.5) * std::exp(-1 / (4 * s));
            };
            CHECK(boundary_term_integral(k, d0) == doctest::Approx(simpson(f, 0.0, d0, 20000)).epsilon(1e-9));
        }
}

TEST_CASE("series plus remainder rebuild the radial integral and bound the direct one") {
    for (double d0 : {0.2, 0.1, 0.05})
        for (int m : {1, 3, 6}) {
            const auto r = lipschitz_moment_bound(1.0, 0.01, d0, m);
            CHECK(r.positive_sum == doctest::Approx(r.radial_integral).epsilon(1e-8));
            CHECK(r.direct <= r.series_bound);
            CHECK(r.terms.size() == static_cast<std::size_t>(m));
        }
}

TEST_CASE("radial and direct integrals agree with independent quadrature") {
    const double d0 = 0.2;
    const double pi = std::numbers::pi;
    const auto inner = [&](double s) {
        // Limit σ → 0 of the inner integral from the full Gaussian moment.
        if (s <= 0) return 1.5 / pi;
        const auto g = [&](double u) { return std::pow(u, 4) * std::exp(-u * u / (4 * s)); };
        return simpson(g, 0.0, std::min(1.0, 20.0 * std::sqrt(s)), 400) / s * std::pow(4 * pi * s, -1.5);
    };
    const double radial = simpson(inner, 0.0, d0, 2000);
    const auto r = lipschitz_moment_bound(2.0, 0.01, d0, 4);
    CHECK(r.radial_integral == doctest::Approx(radial).epsilon(1e-7));
    // The half-ball integral of 4y₁²/(4νσ) is |y|²/(6νσ) over the full ball.
    CHECK(r.direct == doctest::Approx(2.0 * radial / (6 * pi)).epsilon(1e-7));
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS(lipschitz_moment_bound(1.0, 0.01, 1.0, 3));
    CHECK_THROWS(lipschitz_moment_bound(1.0, 0.0, 0.1, 3));
    CHECK_THROWS(lipschitz_moment_bound(1.0, 0.01, 0.1, 0));
}
