#include "boltzlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace boltzlab {

namespace {

double dist2(const KernelProbe& p) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < p.z.size(); ++i) r2 += (p.z[i] - p.y[i]) * (p.z[i] - p.y[i]);
    return r2;
}

double speed(const KernelProbe& p, int d) {
    double v2 = 0.0;
    for (int i = 0; i < d; ++i) v2 += p.z[d + i] * p.z[d + i];
    return std::sqrt(v2);
}

// log of the prefactor without c: (1+|v|)/(ν^d τ^{(2d+α)/2}).
double log_prefactor(const KernelProbe& p, int alpha, double nu, int d, bool vel) {
    const double tau = p.t - p.s;
    double l = -d * std::log(nu) - 0.5 * (2 * d + alpha) * std::log(tau);
    if (vel) l += std::log1p(speed(p, d));
    return l;
}

// Ordinary least squares y ≈ a + b x.
std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double b = sxx > 0.0 ? sxy / sxx : 0.0;
    return {my - b * mx, b};
}

}  // namespace

double kernel_derivative_magnitude(const KernelFn& k, int alpha, const KernelProbe& p, double nu,
                                   double fd_rel_step) {
    if (!(p.t > p.s)) throw std::invalid_argument("bound probes need t > s");
    if (alpha == 0) return std::fabs(k(p.t, p.z.data(), p.s, p.y.data()));
    if (alpha != 1) throw std::invalid_argument("derivative order must be 0 or 1");
    const double h = fd_rel_step * std::sqrt(nu * (p.t - p.s));
    std::vector<double> zp = p.z, zm = p.z;
    double best = 0.0;
    for (std::size_t a = 0; a < p.z.size(); ++a) {
        zp[a] = p.z[a] + h;
        zm[a] = p.z[a] - h;
        const double g = (k(p.t, zp.data(), p.s, p.y.data()) - k(p.t, zm.data(), p.s, p.y.data())) / (2.0 * h);
        best = std::max(best, std::fabs(g));
        zp[a] = zm[a] = p.z[a];
    }
    return best;
}

double envelope_value(const BoundFit& fit, const KernelProbe& p, double nu, int d) {
    const double tau = p.t - p.s;
    return fit.c_fit * std::exp(log_prefactor(p, fit.alpha, nu, d, fit.uses_velocity_factor) -
                                fit.lambda_fit * dist2(p) / (nu * tau));
}

BoundFit apriori_bound_fit(const KernelFn& kernel, int alpha, const std::vector<KernelProbe>& probes,
                           const BoundFitOptions& opts) {
    BoundFit fit;
    fit.alpha = alpha;
    fit.uses_velocity_factor = opts.use_velocity_factor;
    const int d = opts.d;
    std::vector<double> logm(probes.size()), rho(probes.size()), target(probes.size());
    std::vector<char> usable(probes.size(), 0);
    std::vector<double> cx, cy;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const auto& p = probes[i];
        if (static_cast<int>(p.z.size()) != 2 * d || p.y.size() != p.z.size())
            throw std::invalid_argument("bound probes must have 2d coordinates");
        const double m = kernel_derivative_magnitude(kernel, alpha, p, opts.nu, opts.fd_rel_step);
        if (!(m > 0.0)) continue;
        usable[i] = 1;
        logm[i] = std::log(m);
        rho[i] = dist2(p) / (opts.nu * (p.t - p.s));
        target[i] = logm[i] - log_prefactor(p, alpha, opts.nu, d, opts.use_velocity_factor);
        if (speed(p, d) <= opts.calibration_speed) {
            cx.push_back(rho[i]);
            cy.push_back(target[i]);
        }
    }
    if (cx.size() < 2) {
        fit.message = "fewer than two calibration probes";
        return fit;
    }
    const auto [a, b] = line_fit(cx, cy);
    fit.lambda_fit = -b;
    // Smallest c dominating the calibration probes at the fitted rate.
    double logc = -1e300;
    for (std::size_t i = 0; i < cx.size(); ++i) logc = std::max(logc, cy[i] + fit.lambda_fit * cx[i]);
    (void)a;
    fit.c_fit = std::exp(logc);

    std::vector<double> lt, lr;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        if (!usable[i]) continue;
        const double res = target[i] - (logc - fit.lambda_fit * rho[i]);
        fit.max_log_residual = std::max(fit.max_log_residual, res);
        if (res > 1e-9) fit.violating.push_back(static_cast<int>(i));
        lt.push_back(std::log(probes[i].t - probes[i].s));
        double r = logm[i] + fit.lambda_fit * rho[i];
        if (opts.use_velocity_factor) r -= std::log1p(speed(probes[i], d));
        lr.push_back(r);
    }
    if (lt.size() >= 2) fit.time_exponent = line_fit(lt, lr).second;

    std::ostringstream os;
    if (!(fit.lambda_fit > 0.0)) {
        os << "fitted Gaussian rate is not positive (lambda = " << fit.lambda_fit << ")";
    } else if (fit.c_fit > opts.max_c) {
        os << "no dominating envelope with c <= " << opts.max_c << " (c = " << fit.c_fit << ")";
    } else if (!fit.violating.empty()) {
        os << fit.violating.size() << " probe(s) exceed the envelope:";
        for (int i : fit.violating) os << ' ' << i;
    } else {
        fit.success = true;
        os << "envelope dominates all " << lt.size() << " probes";
    }
    fit.message = os.str();
    return fit;
}

double time_exponent_fit(const KernelFn& kernel, int alpha, const std::vector<double>& taus,
                         const std::vector<double>& y, const std::vector<double>& unit_offset, double nu) {
    std::vector<double> lx, ly;
    for (double tau : taus) {
        KernelProbe p;
        p.s = 0.0;
        p.t = tau;
        p.y = y;
        p.z = y;
        for (std::size_t i = 0; i < y.size(); ++i) p.z[i] += unit_offset[i] * std::sqrt(nu * tau);
        const double m = kernel_derivative_magnitude(kernel, alpha, p, nu);
        if (!(m > 0.0)) continue;
        lx.push_back(std::log(tau));
        ly.push_back(std::log(m));
    }
    if (lx.size() < 2) throw std::invalid_argument("time_exponent_fit needs two probes with nonzero values");
    return line_fit(lx, ly).second;
}

}  // namespace boltzlab
