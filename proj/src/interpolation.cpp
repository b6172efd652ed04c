#include "boltzlab/interpolation.hpp"

#include <cmath>
#include <stdexcept>

namespace boltzlab {

std::string to_string(InterpolationKind k) {
    return k == InterpolationKind::multilinear ? "multilinear" : "cubic_bspline";
}

InterpolationKind interpolation_from_string(const std::string& s) {
    if (s == "multilinear") return InterpolationKind::multilinear;
    if (s == "cubic_bspline") return InterpolationKind::cubic_bspline;
    throw std::invalid_argument("unknown interpolation '" + s + "' (expected multilinear or cubic_bspline)");
}

void bspline_weights(double t, double* w) {
    const double u = 1.0 - t;
    const double t2 = t * t, t3 = t2 * t;
    w[0] = u * u * u / 6.0;
    w[1] = (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0;
    w[2] = (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0;
    w[3] = t3 / 6.0;
}

void bspline_derivative_weights(double t, double* w) {
    const double u = 1.0 - t;
    w[0] = -0.5 * u * u;
    w[1] = 1.5 * t * t - 2.0 * t;
    w[2] = -1.5 * t * t + t + 0.5;
    w[3] = 0.5 * t * t;
}

void bspline_prefilter_line(double* c, std::size_t n, std::size_t st) {
    if (n < 2) return;
    const double z = std::sqrt(3.0) - 2.0;
    const double gain = (1.0 - z) * (1.0 - 1.0 / z);
    for (std::size_t i = 0; i < n; ++i) c[i * st] *= gain;
    // Causal initialisation with mirror boundary, truncated once z^k is negligible.
    std::size_t horizon = std::min<std::size_t>(n, 30);
    double sum = c[0], zk = z;
    for (std::size_t k = 1; k < horizon; ++k) {
        sum += zk * c[k * st];
        zk *= z;
    }
    c[0] = sum;
    for (std::size_t k = 1; k < n; ++k) c[k * st] += z * c[(k - 1) * st];
    c[(n - 1) * st] = (z / (z * z - 1.0)) * (c[(n - 1) * st] + z * c[(n - 2) * st]);
    for (std::size_t k = n - 1; k-- > 0;) c[k * st] = z * (c[(k + 1) * st] - c[k * st]);
}

Interpolant::Interpolant(const double* values, int dims, const int* n, const double* lo, const double* h,
                         InterpolationKind kind, int pad)
    : kind_(kind), dims_(dims), pad_(pad) {
    if (dims < 1 || dims > kMaxAxes) throw std::invalid_argument("Interpolant: unsupported dimension");
    if (pad < 2) throw std::invalid_argument("Interpolant: padding must be at least 2");
    std::size_t total = 1;
    for (int a = dims - 1; a >= 0; --a) {
        n_[a] = n[a];
        lo_[a] = lo[a];
        h_[a] = h[a];
        m_[a] = n[a] + 2 * pad;
        stride_[a] = total;
        total *= static_cast<std::size_t>(m_[a]);
    }
    samples_.assign(total, 0.0);
    // Copy interior samples.
    std::size_t count = 1;
    for (int a = 0; a < dims; ++a) count *= static_cast<std::size_t>(n[a]);
    int idx[kMaxAxes] = {0};
    for (std::size_t f = 0; f < count; ++f) {
        std::size_t rem = f, p = 0;
        for (int a = dims - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(rem % static_cast<std::size_t>(n[a]));
            rem /= static_cast<std::size_t>(n[a]);
        }
        for (int a = 0; a < dims; ++a) p += static_cast<std::size_t>(idx[a] + pad) * stride_[a];
        samples_[p] = values[f];
    }
    if (kind == InterpolationKind::cubic_bspline) {
        coef_ = samples_;
        for (int a = 0; a < dims; ++a) {
            const std::size_t st = stride_[a];
            const std::size_t line = static_cast<std::size_t>(m_[a]);
            for (std::size_t base = 0; base < total; ++base) {
                if ((base / st) % line != 0) continue;
                bspline_prefilter_line(coef_.data() + base, line, st);
            }
        }
    }
}

namespace {
std::array<double, kMaxAxes> grid_lo(const PhaseGrid& g) {
    std::array<double, kMaxAxes> lo{};
    for (int a = 0; a < g.dims(); ++a) lo[a] = -g.extent(a);
    return lo;
}
std::array<double, kMaxAxes> grid_h(const PhaseGrid& g) {
    std::array<double, kMaxAxes> h{};
    for (int a = 0; a < g.dims(); ++a) h[a] = g.h(a);
    return h;
}
std::array<int, kMaxAxes> grid_n(const PhaseGrid& g) {
    std::array<int, kMaxAxes> n{};
    for (int a = 0; a < g.dims(); ++a) n[a] = g.n(a);
    return n;
}
}  // namespace

Interpolant::Interpolant(const DensityField& f, InterpolationKind kind, int pad)
    : Interpolant(f.values.data(), f.grid.dims(), grid_n(f.grid).data(), grid_lo(f.grid).data(),
                  grid_h(f.grid).data(), kind, pad) {}

double Interpolant::value(const double* point) const { return value_and_gradient(point, nullptr); }

double Interpolant::value_and_gradient(const double* point, double* grad) const {
    const int taps = kind_ == InterpolationKind::cubic_bspline ? 4 : 2;
    const int shift = kind_ == InterpolationKind::cubic_bspline ? -1 : 0;
    const std::vector<double>& c = coefficients();
    double w[kMaxAxes][4], dw[kMaxAxes][4];
    int base[kMaxAxes];
    for (int a = 0; a < dims_; ++a) {
        const double u = (point[a] - lo_[a]) / h_[a] + pad_;
        if (!(u > -2.0 && u < m_[a] + 1.0)) {
            if (grad)
                for (int b = 0; b < dims_; ++b) grad[b] = 0.0;
            return 0.0;
        }
        const double fl = std::floor(u);
        const double t = u - fl;
        base[a] = static_cast<int>(fl) + shift;
        if (taps == 4) {
            bspline_weights(t, w[a]);
            bspline_derivative_weights(t, dw[a]);
        } else {
            w[a][0] = 1.0 - t;
            w[a][1] = t;
            dw[a][0] = -1.0;
            dw[a][1] = 1.0;
        }
        for (int p = 0; p < taps; ++p) dw[a][p] /= h_[a];
    }
    int total = 1;
    for (int a = 0; a < dims_; ++a) total *= taps;
    double val = 0.0;
    double g[kMaxAxes] = {0.0};
    for (int tap = 0; tap < total; ++tap) {
        int rem = tap;
        std::size_t off = 0;
        bool inside = true;
        int pidx[kMaxAxes];
        for (int a = dims_ - 1; a >= 0; --a) {
            pidx[a] = rem % taps;
            rem /= taps;
            const int j = base[a] + pidx[a];
            if (j < 0 || j >= m_[a]) {
                inside = false;
                break;
            }
            off += static_cast<std::size_t>(j) * stride_[a];
        }
        if (!inside) continue;
        const double cv = c[off];
        if (cv == 0.0) continue;
        double prod = 1.0;
        for (int a = 0; a < dims_; ++a) prod *= w[a][pidx[a]];
        val += prod * cv;
        if (grad) {
            for (int a = 0; a < dims_; ++a) {
                double pa = dw[a][pidx[a]];
                for (int b = 0; b < dims_; ++b)
                    if (b != a) pa *= w[b][pidx[b]];
                g[a] += pa * cv;
            }
        }
    }
    if (grad)
        for (int a = 0; a < dims_; ++a) grad[a] = g[a];
    return val;
}

}  // namespace boltzlab
