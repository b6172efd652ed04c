#include "boltzlab/moment_bound.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "boltzlab/quadrature.hpp"

namespace boltzlab {

namespace {

i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("R_k coefficients overflow 128-bit arithmetic");
    return r;
}

i128 gcd(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::string to_str(i128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    std::string s;
    while (v != 0) {
        int digit = static_cast<int>(v % 10);
        if (digit < 0) digit = -digit;
        s.insert(s.begin(), static_cast<char>('0' + digit));
        v /= 10;
    }
    return neg ? "-" + s : s;
}

}  // namespace

std::string Rational::str() const { return to_str(num) + "/" + to_str(den); }

std::vector<Rational> r_coefficients(int m) {
    if (m < 1) throw std::invalid_argument("r_coefficients: m must be >= 1");
    std::vector<Rational> out;
    Rational R{1, 5};
    out.push_back(R);
    for (int k = 1; k < m; ++k) {
        R.den = checked_mul(R.den, 2 * (6 + 2 * k - 1));
        const i128 g = gcd(R.num, R.den);
        R.num /= g;
        R.den /= g;
        out.push_back(R);
    }
    return out;
}

bool r_coefficient_bound_holds(const Rational& R, int k) {
    if (R.num <= 0 || R.den <= 0) return false;
    i128 b = 1;
    for (int i = 0; i < k; ++i) b = checked_mul(b, 4);
    for (int i = 2; i <= k + 1; ++i) b = checked_mul(b, i);
    // R < 1/b  ⇔  num·b < den.
    return checked_mul(R.num, b) < R.den;
}

double boundary_term_integral(int k, double delta0) {
    // Substituting u = 1/(4σ) gives 4^{k+1/2} Γ(k+1/2, 1/(4Δ0)) (4π)^{−3/2}.
    const double a = k + 0.5;
    return std::pow(4.0, a) * boost::math::tgamma(a, 1.0 / (4.0 * delta0)) *
           std::pow(4.0 * std::numbers::pi, -1.5);
}

namespace {

// σ-integral over (0, Δ0] on geometric panels; the radial integrands stay
// bounded as σ → 0, so the grading only has to resolve [0, 2^{-60}Δ0].
double sigma_integral(const std::function<double(double)>& f, double delta0) {
    double total = 0.0;
    double hi = delta0;
    for (int level = 0; level < 60; ++level) {
        const double lo = hi * 0.5;
        total += integrate_gl(f, lo, hi, 2, 12);
        hi = lo;
    }
    return total;
}

// ∫_0^{min(1, b)} g(u) du where the Gaussian factor e^{−u²/(4σ)} is below
// e^{−100} beyond b = 20√σ.
double radial_integral(const std::function<double(double)>& g, double sig) {
    return integrate_gl(g, 0.0, std::min(1.0, 20.0 * std::sqrt(sig)), 8, 16);
}

}  // namespace

MomentBoundResult lipschitz_moment_bound(double L, double nu, double delta0, int m) {
    if (!(delta0 > 0.0 && delta0 < 1.0)) throw std::invalid_argument("lipschitz_moment_bound: delta0 must lie in (0,1)");
    if (!(nu > 0.0)) throw std::invalid_argument("lipschitz_moment_bound: nu must be positive");
    if (m < 1) throw std::invalid_argument("lipschitz_moment_bound: m must be >= 1");
    const auto R = r_coefficients(m);
    MomentBoundResult out;
    const double pi = std::numbers::pi;

    double alt = 0.0, pos = 0.0;
    for (int k = 1; k <= m; ++k) {
        const double t = R[k - 1].to_double() * boundary_term_integral(k, delta0);
        out.terms.push_back(t);
        alt += (k % 2 == 1 ? 1.0 : -1.0) * t;
        pos += t;
    }
    for (int k = 1; k < m; ++k)
        if (!(out.terms[k] < out.terms[k - 1])) out.flagged = true;

    // Remainder after m integrations by parts, in the scaled radius u = r/√ν:
    // (R_m/2) ∫∫ u^{2m+4} σ^{−m−1} (4πσ)^{−3/2} e^{−u²/(4σ)} du dσ.
    const double Rm = R[m - 1].to_double();
    const auto rem_sigma = [&](double sig) {
        const auto f = [&](double u) {
            return std::pow(u, 2 * m + 4) * std::exp(-u * u / (4.0 * sig));
        };
        return radial_integral(f, sig) * std::pow(sig, -m - 1) * std::pow(4.0 * pi * sig, -1.5);
    };
    out.remainder = 0.5 * Rm * sigma_integral(rem_sigma, delta0);
    out.boundary_sum = std::fabs(L * alt);
    out.series_bound = out.boundary_sum + std::fabs(L * out.remainder);
    out.positive_sum = pos + out.remainder;

    // Radial integral ∫ r⁴/(νσ) G_ν(σ, r) dr over [0, √ν], scaled radius.
    const auto rad_sigma = [&](double sig) {
        const auto f = [&](double u) { return std::pow(u, 4) * std::exp(-u * u / (4.0 * sig)); };
        return radial_integral(f, sig) / sig * std::pow(4.0 * pi * sig, -1.5);
    };
    out.radial_integral = sigma_integral(rad_sigma, delta0);

    // Direct evaluation of ∫∫_{y_1 ≥ 0, |y| ≤ √ν} 4y_1²/(4νσ) G_ν(σ, y) dy dσ in
    // spherical coordinates about the y_1 axis, then the 1/(4π²) prefactor.
    const double a = std::sqrt(nu);
    const auto dir_sigma = [&](double sig) {
        const auto fr = [&](double r) {
            const auto fth = [&](double th) {
                const double y1 = r * std::cos(th);
                return 4.0 * y1 * y1 / (4.0 * nu * sig) * std::sin(th);
            };
            const double ang = 2.0 * pi * integrate_gl(fth, 0.0, 0.5 * pi, 2, 12);
            return ang * r * r * std::pow(4.0 * pi * nu * sig, -1.5) * std::exp(-r * r / (4.0 * nu * sig));
        };
        return integrate_gl(fr, 0.0, std::min(a, 20.0 * std::sqrt(nu * sig)), 8, 16);
    };
    out.direct = std::fabs(L) * sigma_integral(dir_sigma, delta0) / (4.0 * pi * pi);
    out.message = out.flagged ? "series terms do not decrease; outside the validity region" : "ok";
    return out;
}

}  // namespace boltzlab
