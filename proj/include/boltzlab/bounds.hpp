#pragma once

#include <string>
#include <vector>

#include "boltzlab/kernels.hpp"

namespace boltzlab {

struct BoundFitOptions {
    double nu = 0.1;
    int d = 1;                    // spatial dimension; the state space has 2d axes
    bool use_velocity_factor = false;
    // Probes whose |z_v| does not exceed this speed calibrate (c, λ); all
    // probes then validate the envelope.
    double calibration_speed = 1.0;
    double fd_rel_step = 1e-4;    // central-difference step relative to √(ν(t−s))
    double max_c = 1e6;
};

struct BoundFit {
    double c_fit = 0.0;
    double lambda_fit = 0.0;
    int alpha = 0;
    bool uses_velocity_factor = false;
    bool success = false;
    double time_exponent = 0.0;   // regression slope of log|D^αΓ| against log(t−s)
    double max_log_residual = 0.0;
    std::vector<int> violating;   // probe indices above the envelope
    std::string message;
};

// |D^αΓ| for α ∈ {0, 1}; for α = 1 the largest central-difference partial
// derivative in z over all 2d axes.
double kernel_derivative_magnitude(const KernelFn& k, int alpha, const KernelProbe& p, double nu,
                                   double fd_rel_step = 1e-4);

// Gaussian envelope c·(1+|v|)^{[flag]}/(ν^d (t−s)^{(2d+α)/2})·exp(−λ|z−y|²/(ν(t−s))).
double envelope_value(const BoundFit& fit, const KernelProbe& p, double nu, int d);

BoundFit apriori_bound_fit(const KernelFn& kernel, int alpha, const std::vector<KernelProbe>& probes,
                           const BoundFitOptions& opts);

// Slope of log|D^αΓ| against log τ for probes whose offset z − y is held at
// a fixed multiple of √(ντ).
double time_exponent_fit(const KernelFn& kernel, int alpha, const std::vector<double>& taus,
                         const std::vector<double>& y, const std::vector<double>& unit_offset, double nu);

}  // namespace boltzlab
