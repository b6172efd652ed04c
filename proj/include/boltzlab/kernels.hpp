#pragma once

#include <functional>
#include <string>
#include <vector>

namespace boltzlab {

struct HeatKernelSpec {
    double nu = 1.0;
    int dim = 1;
};

// (4πν(t−s))^{−D/2} exp(−|z−y|²/(4ν(t−s))).
double heat_kernel(double t, const double* z, double s, const double* y, const HeatKernelSpec& spec);

// Exact transition density of dX = V dt + √(2ν)dW_x, dV = √(2ν)dW_v from
// y = (x, v) at time s to z at time t. Points are (x_1..x_d, v_1..v_d).
double kolmogorov_oracle(double t, const double* z, double s, const double* y, double nu, int d);

// Reversed-drift density run from z back to y; equals the forward oracle by
// the adjoint identity, but is computed from its own mean and covariance.
double kolmogorov_adjoint(double s, const double* y, double t, const double* z, double nu, int d);

struct KolmogorovMoments {
    double var_x, cov_xv, var_v;  // per spatial axis
};
KolmogorovMoments kolmogorov_moments(double tau, double nu);

// Pointwise two-point kernel Γ(t, z; s, y).
using KernelFn = std::function<double(double t, const double* z, double s, const double* y)>;

struct KernelEvaluator {
    std::string name;
    int dim = 1;                 // dimension of z and y
    KernelFn forward;            // Γ(t, z; s, y)
    KernelFn adjoint;            // Γ*(s, y; t, z) with the listed argument order (t, z, s, y)
};

KernelEvaluator heat_evaluator(double nu, int dim);
KernelEvaluator oracle_evaluator(double nu, int d);

struct KernelProbe {
    double t = 1.0, s = 0.0;
    std::vector<double> z, y;
};

struct AdjointReport {
    double max_defect = 0.0;
    std::vector<double> forward, adjoint;
};

AdjointReport adjoint_check(const KernelEvaluator& k, const std::vector<KernelProbe>& probes);

}  // namespace boltzlab
