#pragma once

#include <string>
#include <vector>

#include "boltzlab/collision.hpp"
#include "boltzlab/grid.hpp"

namespace boltzlab {

// r ln r − r + 1, evaluated without cancellation near r = 1.
double entropy_phi(double r);

// Node-wise N ln(N/M) − N + M; N = 0 contributes M.
std::vector<double> relative_entropy_integrand(const DensityField& N, const DensityField& M);

// Trapezoid integral of the integrand over nodes with |z| ≤ cutoff
// (cutoff <= 0 means the whole box).
double relative_entropy(const DensityField& N, const DensityField& M, double cutoff = 0.0);

// (2π)^{−d/2} exp(−|x|²/2), constant in v.
double reference_gaussian_value(const double* z, int d);
DensityField reference_gaussian(const PhaseGrid& grid);

struct EntropyScanOptions {
    int d = 3;
    int radial_panels_per_unit = 8;   // Gauss–Legendre panels per unit radius
    int radial_order = 8;
    int angular_nodes = 48;
    bool reference_profile = false;   // use N = G instead of 1/(1+r^s)
};

struct EntropyScan {
    double s = 0.0;
    int d = 3;
    std::vector<double> cutoffs;
    std::vector<double> values;          // H(p|G) over the ball |z| ≤ cutoff
    std::vector<double> data_part;       // ∫ p ln(p/G) − p
    std::vector<double> reference_part;  // ∫ G
    double slope_fit = 0.0;        // least-squares a in data_part ≈ a·∫ r²cos²φ/2 · p
    double growth_exponent = 0.0;  // log-log slope of data_part over the last two cutoffs
    bool increasing = false;
    bool increments_increasing = false;
    bool diverging = false;
    std::string message;
};

EntropyScan entropy_divergence_scan(double s, const std::vector<double>& cutoffs, const EntropyScanOptions& opts = {});

struct EntropyProductionTrace {
    std::vector<double> times;
    std::vector<double> rates;        // ∫ R(F)(t, x) dx per slice
    std::vector<double> cumulative;   // trapezoid integral in time
    double min_rate = 0.0;
    bool nonnegative = true;          // every rate ≥ −tol
    bool cumulative_nondecreasing = true;
};

EntropyProductionTrace entropy_production_trace(const std::vector<DensityField>& slices, const CollisionConfig& cfg,
                                                double tol = 0.0);

}  // namespace boltzlab
