#pragma once

#include <string>
#include <vector>

namespace boltzlab {

using i128 = __int128;

struct Rational {
    i128 num = 0;
    i128 den = 1;
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const;
};

// R_1 = 1/5, R_{k+1} = R_k / (2(6+2k−1)); exact, rejects on 128-bit overflow.
std::vector<Rational> r_coefficients(int m);

// Exact test of 0 < R_k < 1/(4^k (k+1)!).
bool r_coefficient_bound_holds(const Rational& R, int k);

struct MomentBoundResult {
    double series_bound = 0.0;   // |L Σ (−1)^{k+1} R_k T_k| + |L·remainder|
    double direct = 0.0;         // the half-ball second-moment integral with its 1/(4π²) prefactor
    double boundary_sum = 0.0;   // |L Σ (−1)^{k+1} R_k T_k| alone
    std::vector<double> terms;   // R_k T_k
    double remainder = 0.0;
    double radial_integral = 0.0;   // ∫_0^{Δ0}∫_0^{√ν} r⁴/(νσ) G dr dσ
    double positive_sum = 0.0;      // Σ R_k T_k + remainder, equal to radial_integral
    bool flagged = false;           // term magnitudes fail to decrease
    std::string message;
};

// ∫_0^{Δ0} σ^{−k} (4πσ)^{−3/2} e^{−1/(4σ)} dσ.
double boundary_term_integral(int k, double delta0);

MomentBoundResult lipschitz_moment_bound(double L, double nu, double delta0, int m);

}  // namespace boltzlab
