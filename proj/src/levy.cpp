#include "boltzlab/levy.hpp"

#include <cmath>
#include <stdexcept>

#include "boltzlab/grid.hpp"
#include "boltzlab/quadrature.hpp"

namespace boltzlab {

LevyKernel::LevyKernel(int K, double nu, int d, LevyOptions opts) : K_(K), nu_(nu), d_(d), opts_(opts) {
    if (K < 0) throw std::invalid_argument("levy kernel: order K must be >= 0");
    if (!(nu > 0.0)) throw std::invalid_argument("levy kernel: nu must be positive");
    if (d < 1 || d > 3) throw std::invalid_argument("levy kernel: d must be 1, 2 or 3");
    if (opts.n_sigma < 1 || opts.n_gh < 1) throw std::invalid_argument("levy kernel: quadrature sizes must be >= 1");
    const int ns[2] = {opts.n_sigma, opts.n_sigma + 2};
    const int nh[2] = {opts.n_gh, opts.n_gh + 1};
    for (int l = 0; l < 2; ++l) {
        const auto gl = gauss_legendre(ns[l], 0.0, 1.0);
        const auto gh = gauss_hermite_normal(nh[l]);
        rules_[l] = {gl.nodes, gl.weights, gh.nodes, gh.weights};
    }
}

// ℓ_k = L_k / G(t−s, z−y).
double LevyKernel::ell(int k, double t, const double* z, double s, const double* y, int level) const {
    const double beta = opts_.drift;
    if (beta == 0.0) return 0.0;
    const int d = d_;
    if (k == 1) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i) acc += z[d + i] * (z[i] - y[i]);
        return -beta * acc / (2.0 * nu_ * (t - s));
    }
    const Rules& R = rules_[level];
    const int D = 2 * d;
    const int nh = static_cast<int>(R.gh_x.size());
    int total = 1;
    for (int a = 0; a < D; ++a) total *= nh;
    double acc[3] = {0.0, 0.0, 0.0};
    double zeta[kMaxAxes];
    for (std::size_t q = 0; q < R.gl_x.size(); ++q) {
        const double lam = R.gl_x[q];
        const double sig = s + lam * (t - s);
        const double sd = std::sqrt(2.0 * nu_ * lam * (1.0 - lam) * (t - s));
        const double wt = R.gl_w[q] * (t - s);
        double part[3] = {0.0, 0.0, 0.0};
        for (int c = 0; c < total; ++c) {
            int rem = c;
            double w = 1.0;
            for (int a = D - 1; a >= 0; --a) {
                const int j = rem % nh;
                rem /= nh;
                zeta[a] = y[a] + lam * (z[a] - y[a]) + sd * R.gh_x[j];
                w *= R.gh_w[j];
            }
            const double inner = ell(k - 1, sig, zeta, s, y, level);
            for (int i = 0; i < d; ++i) part[i] += w * inner * (zeta[i] - z[i]);
        }
        for (int i = 0; i < d; ++i) acc[i] += wt * part[i] / (2.0 * nu_ * (t - sig));
    }
    double out = 0.0;
    for (int i = 0; i < d; ++i) out += z[d + i] * acc[i];
    return beta * out;
}

// ∫_s^t dσ E_{B_σ} ℓ_k(σ, ζ; s, y), so that G∗L_k = G(t−s, z−y) times this.
double LevyKernel::bridge_mean_ell(int k, double t, const double* z, double s, const double* y, int level) const {
    if (opts_.drift == 0.0) return 0.0;
    const Rules& R = rules_[level];
    const int D = 2 * d_;
    const int nh = static_cast<int>(R.gh_x.size());
    int total = 1;
    for (int a = 0; a < D; ++a) total *= nh;
    double zeta[kMaxAxes];
    double acc = 0.0;
    for (std::size_t q = 0; q < R.gl_x.size(); ++q) {
        const double lam = R.gl_x[q];
        const double sig = s + lam * (t - s);
        const double sd = std::sqrt(2.0 * nu_ * lam * (1.0 - lam) * (t - s));
        double part = 0.0;
        for (int c = 0; c < total; ++c) {
            int rem = c;
            double w = 1.0;
            for (int a = D - 1; a >= 0; --a) {
                const int j = rem % nh;
                rem /= nh;
                zeta[a] = y[a] + lam * (z[a] - y[a]) + sd * R.gh_x[j];
                w *= R.gh_w[j];
            }
            part += w * ell(k, sig, zeta, s, y, level);
        }
        acc += R.gl_w[q] * (t - s) * part;
    }
    return acc;
}

double LevyKernel::with_check(int k, double t, const double* z, double s, const double* y, bool conv,
                              bool* flagged) const {
    const double a = conv ? bridge_mean_ell(k, t, z, s, y, 0) : ell(k, t, z, s, y, 0);
    if (opts_.verify && k >= 2 - (conv ? 1 : 0)) {
        const double b = conv ? bridge_mean_ell(k, t, z, s, y, 1) : ell(k, t, z, s, y, 1);
        const double scale = std::max(std::fabs(a), std::fabs(b));
        if (std::fabs(a - b) > opts_.rel_tol * scale + 1e-300 && flagged) *flagged = true;
    }
    if (!std::isfinite(a)) throw std::domain_error("levy kernel: non-finite quadrature value");
    return a;
}

double LevyKernel::term(int k, double t, const double* z, double s, const double* y, bool* flagged) const {
    if (!(t > s)) throw std::invalid_argument("levy term: requires t > s");
    if (k < 1) throw std::invalid_argument("levy term: k must be >= 1");
    const HeatKernelSpec spec{nu_, 2 * d_};
    return heat_kernel(t, z, s, y, spec) * with_check(k, t, z, s, y, false, flagged);
}

double LevyKernel::convolved_term(int k, double t, const double* z, double s, const double* y,
                                  bool* flagged) const {
    if (!(t > s)) throw std::invalid_argument("levy term: requires t > s");
    if (k < 1) throw std::invalid_argument("levy term: k must be >= 1");
    const HeatKernelSpec spec{nu_, 2 * d_};
    return heat_kernel(t, z, s, y, spec) * with_check(k, t, z, s, y, true, flagged);
}

std::vector<double> LevyKernel::partial_sums(double t, const double* z, double s, const double* y,
                                             bool* flagged) const {
    if (!(t > s)) throw std::invalid_argument("levy kernel: requires t > s");
    const HeatKernelSpec spec{nu_, 2 * d_};
    const double G = heat_kernel(t, z, s, y, spec);
    std::vector<double> out{G};
    double factor = 1.0, sign = 1.0;
    for (int k = 1; k <= K_; ++k) {
        sign = -sign;
        factor += sign * with_check(k, t, z, s, y, true, flagged);
        out.push_back(G * factor);
    }
    return out;
}

double LevyKernel::value(double t, const double* z, double s, const double* y, bool* flagged) const {
    return partial_sums(t, z, s, y, flagged).back();
}

KernelEvaluator LevyKernel::evaluator() const {
    KernelEvaluator k;
    k.name = "levy";
    k.dim = 2 * d_;
    const LevyKernel fwd = *this;
    LevyOptions ro = opts_;
    ro.drift = -opts_.drift;
    const LevyKernel rev(K_, nu_, d_, ro);
    k.forward = [fwd](double t, const double* z, double s, const double* y) { return fwd.value(t, z, s, y); };
    k.adjoint = [rev](double t, const double* z, double s, const double* y) { return rev.value(t, y, s, z); };
    return k;
}

double levy_term(int k, double t, const double* z, double s, const double* y, double nu, int d,
                 const LevyOptions& opts, bool* flagged) {
    return LevyKernel(std::max(k, 1), nu, d, opts).term(k, t, z, s, y, flagged);
}

}  // namespace boltzlab
