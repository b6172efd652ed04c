#include "boltzlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "boltzlab/parallel.hpp"

namespace boltzlab {

std::string to_string(GridMode m) { return m == GridMode::homogeneous ? "homogeneous" : "inhomogeneous"; }

GridMode grid_mode_from_string(const std::string& s) {
    if (s == "homogeneous") return GridMode::homogeneous;
    if (s == "inhomogeneous") return GridMode::inhomogeneous;
    throw std::invalid_argument("unknown grid mode '" + s + "' (expected homogeneous or inhomogeneous)");
}

PhaseGrid::PhaseGrid(int d, GridMode mode, int n_x, double x_extent, int n_v, double v_extent)
    : d_(d), mode_(mode), n_x_(n_x), n_v_(n_v), x_extent_(x_extent), v_extent_(v_extent) {
    if (d < 1 || d > 3) throw std::invalid_argument("grid dimension d must be 1, 2 or 3");
    if (n_v < 3 || n_v % 2 == 0) throw std::invalid_argument("n_v must be odd and >= 3");
    if (!(v_extent > 0.0)) throw std::invalid_argument("v_extent must be positive");
    if (mode == GridMode::inhomogeneous) {
        if (n_x < 3 || n_x % 2 == 0) throw std::invalid_argument("n_x must be odd and >= 3");
        if (!(x_extent > 0.0)) throw std::invalid_argument("x_extent must be positive");
    } else {
        n_x_ = 1;
        x_extent_ = 0.0;
    }
    const int D = dims();
    std::size_t s = 1;
    for (int a = D - 1; a >= 0; --a) {
        stride_[a] = s;
        s *= static_cast<std::size_t>(n(a));
    }
    size_ = s;
}

PhaseGrid PhaseGrid::homogeneous(int d, int n_v, double v_extent) {
    return PhaseGrid(d, GridMode::homogeneous, 1, 0.0, n_v, v_extent);
}

PhaseGrid PhaseGrid::inhomogeneous(int d, int n_x, double x_extent, int n_v, double v_extent) {
    return PhaseGrid(d, GridMode::inhomogeneous, n_x, x_extent, n_v, v_extent);
}

std::size_t PhaseGrid::velocity_size() const {
    std::size_t s = 1;
    for (int i = 0; i < d_; ++i) s *= static_cast<std::size_t>(n_v_);
    return s;
}

void PhaseGrid::unflatten(std::size_t flat, int* idx) const {
    for (int a = 0; a < dims(); ++a) {
        idx[a] = static_cast<int>(flat / stride_[a]);
        flat %= stride_[a];
    }
}

std::size_t PhaseGrid::flatten(const int* idx) const {
    std::size_t f = 0;
    for (int a = 0; a < dims(); ++a) f += static_cast<std::size_t>(idx[a]) * stride_[a];
    return f;
}

void PhaseGrid::node_coords(std::size_t flat, double* z) const {
    int idx[kMaxAxes];
    unflatten(flat, idx);
    for (int a = 0; a < dims(); ++a) z[a] = coord(a, idx[a]);
}

double PhaseGrid::radius(std::size_t flat) const {
    double z[kMaxAxes];
    node_coords(flat, z);
    double r2 = 0.0;
    for (int a = 0; a < dims(); ++a) r2 += z[a] * z[a];
    return std::sqrt(r2);
}

double PhaseGrid::trapezoid_weight(std::size_t flat) const {
    int idx[kMaxAxes];
    unflatten(flat, idx);
    double w = 1.0;
    for (int a = 0; a < dims(); ++a) {
        const bool end = idx[a] == 0 || idx[a] == n(a) - 1;
        w *= end ? 0.5 * h(a) : h(a);
    }
    return w;
}

bool PhaseGrid::operator==(const PhaseGrid& o) const {
    return d_ == o.d_ && mode_ == o.mode_ && n_x_ == o.n_x_ && n_v_ == o.n_v_ && x_extent_ == o.x_extent_ &&
           v_extent_ == o.v_extent_;
}

DensityField sample_field(const PointFunction& generator, const PhaseGrid& grid, double time) {
    DensityField f(grid, time);
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        double z[kMaxAxes];
        for (std::size_t i = b; i < e; ++i) {
            grid.node_coords(i, z);
            f.values[i] = generator(z);
        }
    });
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(f.values[i])) {
            double z[kMaxAxes];
            grid.node_coords(i, z);
            std::ostringstream os;
            os << "generator returned a non-finite value at node " << i << " (z = (";
            for (int a = 0; a < grid.dims(); ++a) os << (a ? ", " : "") << z[a];
            os << "))";
            throw std::domain_error(os.str());
        }
    }
    return f;
}

std::vector<double> gradient_component(const DensityField& f, int axis) {
    const PhaseGrid& g = f.grid;
    const int n = g.n(axis);
    if (n < 3) throw std::invalid_argument("central differences need at least 3 points per axis");
    const std::size_t st = g.stride(axis);
    const double inv2h = 1.0 / (2.0 * g.h(axis));
    std::vector<double> out(g.size());
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const int k = static_cast<int>((i / st) % static_cast<std::size_t>(n));
            const double* p = f.values.data() + i;
            if (k == 0)
                out[i] = (-3.0 * p[0] + 4.0 * p[st] - p[2 * st]) * inv2h;
            else if (k == n - 1)
                out[i] = (3.0 * p[0] - 4.0 * p[-static_cast<std::ptrdiff_t>(st)] +
                          p[-2 * static_cast<std::ptrdiff_t>(st)]) *
                         inv2h;
            else
                out[i] = (p[st] - p[-static_cast<std::ptrdiff_t>(st)]) * inv2h;
        }
    });
    return out;
}

std::vector<double> laplacian(const DensityField& f) {
    const PhaseGrid& g = f.grid;
    std::vector<double> out(g.size(), 0.0);
    for (int a = 0; a < g.dims(); ++a) {
        const int n = g.n(a);
        if (n < 5) throw std::invalid_argument("laplacian needs at least 5 points per axis");
        const std::ptrdiff_t st = static_cast<std::ptrdiff_t>(g.stride(a));
        const double ih2 = 1.0 / (g.h(a) * g.h(a));
        for (std::size_t i = 0; i < g.size(); ++i) {
            const int k = static_cast<int>((i / st) % n);
            const double* p = f.values.data() + i;
            double v;
            if (k == 0)
                v = 2.0 * p[0] - 5.0 * p[st] + 4.0 * p[2 * st] - p[3 * st];
            else if (k == n - 1)
                v = 2.0 * p[0] - 5.0 * p[-st] + 4.0 * p[-2 * st] - p[-3 * st];
            else
                v = p[st] - 2.0 * p[0] + p[-st];
            out[i] += v * ih2;
        }
    }
    return out;
}

double weighted_sup_norm(const DensityField& f, double s, bool with_gradient) {
    const PhaseGrid& g = f.grid;
    std::vector<std::vector<double>> grad;
    if (with_gradient)
        for (int a = 0; a < g.dims(); ++a) grad.push_back(gradient_component(f, a));
    double best = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double v = std::fabs(f.values[i]);
        if (with_gradient) {
            double g2 = 0.0;
            for (const auto& c : grad) g2 += c[i] * c[i];
            v += std::sqrt(g2);
        }
        if (!std::isfinite(v)) throw std::domain_error("weighted_sup_norm: non-finite field value");
        best = std::max(best, (1.0 + std::pow(g.radius(i), s)) * v);
    }
    return best;
}

DecayReport decay_class_fit(const DensityField& f, double s, int m) {
    if (m != 0 && m != 1) throw std::invalid_argument("decay_class_fit: derivative order must be 0 or 1");
    const PhaseGrid& g = f.grid;
    std::vector<std::vector<double>> grad;
    if (m == 1)
        for (int a = 0; a < g.dims(); ++a) grad.push_back(gradient_component(f, a));
    DecayReport rep{s, 0.0, m};
    bool any = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.radius(i);
        if (r < 1.0) continue;
        any = true;
        double v = std::fabs(f.values[i]);
        for (const auto& c : grad) v = std::max(v, std::fabs(c[i]));
        rep.c_fit = std::max(rep.c_fit, (1.0 + std::pow(r, s)) * v);
    }
    if (!any) throw std::invalid_argument("decay_class_fit: no grid node satisfies |z| >= 1");
    return rep;
}

std::vector<double> compactify_coords(const std::vector<double>& z) {
    std::vector<double> y(z.size());
    std::transform(z.begin(), z.end(), y.begin(), [](double t) { return std::atan(t); });
    return y;
}

std::vector<double> decompactify_coords(const std::vector<double>& y) {
    std::vector<double> z(y.size());
    std::transform(y.begin(), y.end(), z.begin(), [](double t) { return std::tan(t); });
    return z;
}

double singular_profile(double r, double alpha0) {
    if (r == 0.0) return 0.0;
    return std::pow(r, 1.0 + alpha0) * std::sin(std::pow(r, -alpha0)) / (1.0 + std::pow(r, 8));
}

DensityField singular_datum(double alpha0, const PhaseGrid& grid) {
    if (!(alpha0 > 0.0 && alpha0 < 5.0)) throw std::invalid_argument("singular_datum: alpha0 must lie in (0,5)");
    const int D = grid.dims();
    return sample_field(
        [&](const double* z) {
            double r2 = 0.0;
            for (int a = 0; a < D; ++a) r2 += z[a] * z[a];
            return singular_profile(std::sqrt(r2), alpha0);
        },
        grid);
}

double maxwellian_value(double a, const double* b, double c, const double* v, int d) {
    double r2 = 0.0;
    for (int j = 0; j < d; ++j) r2 += (v[j] - b[j]) * (v[j] - b[j]);
    return a / std::pow(2.0 * std::numbers::pi * c, 0.5 * d) * std::exp(-r2 / (2.0 * c));
}

DensityField maxwellian_field(double a, const std::vector<double>& b, double c, const PhaseGrid& grid) {
    if (!(a > 0.0) || !(c > 0.0)) throw std::invalid_argument("maxwellian_field: a and c must be positive");
    const int d = grid.d();
    if (static_cast<int>(b.size()) != d) throw std::invalid_argument("maxwellian_field: mean velocity has wrong length");
    const int off = grid.mode() == GridMode::homogeneous ? 0 : d;
    return sample_field([&](const double* z) { return maxwellian_value(a, b.data(), c, z + off, d); }, grid);
}

double integrate(const DensityField& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.grid.size(); ++i) s += f.grid.trapezoid_weight(i) * f.values[i];
    return s;
}

double slice_integral(const double* slice, const PhaseGrid& vgrid) {
    double s = 0.0;
    for (std::size_t i = 0; i < vgrid.size(); ++i) s += vgrid.trapezoid_weight(i) * slice[i];
    return s;
}

double min_value(const DensityField& f) {
    return f.values.empty() ? 0.0 : *std::min_element(f.values.begin(), f.values.end());
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double max_abs(const DensityField& f) { return max_abs(f.values); }

}  // namespace boltzlab
