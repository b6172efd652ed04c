#include "boltzlab/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace boltzlab {

double heat_kernel(double t, const double* z, double s, const double* y, const HeatKernelSpec& spec) {
    if (!(t > s)) throw std::invalid_argument("heat_kernel: requires t > s");
    const double tau = t - s;
    double r2 = 0.0;
    for (int i = 0; i < spec.dim; ++i) r2 += (z[i] - y[i]) * (z[i] - y[i]);
    return std::pow(4.0 * std::numbers::pi * spec.nu * tau, -0.5 * spec.dim) * std::exp(-r2 / (4.0 * spec.nu * tau));
}

KolmogorovMoments kolmogorov_moments(double tau, double nu) {
    return {2.0 * nu * tau + (2.0 / 3.0) * nu * tau * tau * tau, nu * tau * tau, 2.0 * nu * tau};
}

namespace {

// Bivariate normal density per spatial axis with the given covariance.
double pair_density(double dx, double dv, double a, double b, double c) {
    const double det = a * c - b * b;
    const double q = (c * dx * dx - 2.0 * b * dx * dv + a * dv * dv) / det;
    return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(det));
}

}  // namespace

double kolmogorov_oracle(double t, const double* z, double s, const double* y, double nu, int d) {
    if (!(t > s)) throw std::invalid_argument("kolmogorov_oracle: requires t > s");
    const double tau = t - s;
    const auto m = kolmogorov_moments(tau, nu);
    double p = 1.0;
    for (int i = 0; i < d; ++i) {
        const double dx = z[i] - (y[i] + y[d + i] * tau);
        const double dv = z[d + i] - y[d + i];
        p *= pair_density(dx, dv, m.var_x, m.cov_xv, m.var_v);
    }
    return p;
}

double kolmogorov_adjoint(double s, const double* y, double t, const double* z, double nu, int d) {
    if (!(t > s)) throw std::invalid_argument("kolmogorov_adjoint: requires t > s");
    const double tau = t - s;
    const auto m = kolmogorov_moments(tau, nu);
    double p = 1.0;
    for (int i = 0; i < d; ++i) {
        // Drift −v: mean (x − vτ, v), cross covariance −ντ².
        const double dx = y[i] - (z[i] - z[d + i] * tau);
        const double dv = y[d + i] - z[d + i];
        p *= pair_density(dx, dv, m.var_x, -m.cov_xv, m.var_v);
    }
    return p;
}

KernelEvaluator heat_evaluator(double nu, int dim) {
    KernelEvaluator k;
    k.name = "heat";
    k.dim = dim;
    const HeatKernelSpec spec{nu, dim};
    k.forward = [spec](double t, const double* z, double s, const double* y) { return heat_kernel(t, z, s, y, spec); };
    k.adjoint = [spec](double t, const double* z, double s, const double* y) { return heat_kernel(t, y, s, z, spec); };
    return k;
}

KernelEvaluator oracle_evaluator(double nu, int d) {
    KernelEvaluator k;
    k.name = "kolmogorov";
    k.dim = 2 * d;
    k.forward = [nu, d](double t, const double* z, double s, const double* y) {
        return kolmogorov_oracle(t, z, s, y, nu, d);
    };
    k.adjoint = [nu, d](double t, const double* z, double s, const double* y) {
        return kolmogorov_adjoint(s, y, t, z, nu, d);
    };
    return k;
}

AdjointReport adjoint_check(const KernelEvaluator& k, const std::vector<KernelProbe>& probes) {
    AdjointReport r;
    for (const auto& p : probes) {
        const double f = k.forward(p.t, p.z.data(), p.s, p.y.data());
        const double a = k.adjoint(p.t, p.z.data(), p.s, p.y.data());
        r.forward.push_back(f);
        r.adjoint.push_back(a);
        r.max_defect = std::max(r.max_defect, std::fabs(f - a));
    }
    return r;
}

}  // namespace boltzlab
