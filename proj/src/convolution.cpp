#include "boltzlab/convolution.hpp"

#include <cmath>
#include <stdexcept>

#include "boltzlab/parallel.hpp"
#include "boltzlab/quadrature.hpp"

namespace boltzlab {

std::string to_string(LawKind k) {
    switch (k) {
        case LawKind::heat: return "heat";
        case LawKind::kolmogorov: return "kolmogorov";
        case LawKind::transport: return "transport";
    }
    return "heat";
}

LawKind law_kind_from_string(const std::string& s) {
    if (s == "heat") return LawKind::heat;
    if (s == "kolmogorov" || s == "oracle") return LawKind::kolmogorov;
    if (s == "transport") return LawKind::transport;
    throw std::invalid_argument("unknown kernel law '" + s + "'");
}

namespace {

// In-place Cholesky of a symmetric positive semidefinite n×n matrix; zero
// pivots leave a zero column.
void cholesky(std::array<double, kMaxAxes * kMaxAxes>& M, int n) {
    for (int j = 0; j < n; ++j) {
        double s = M[j * kMaxAxes + j];
        for (int k = 0; k < j; ++k) s -= M[j * kMaxAxes + k] * M[j * kMaxAxes + k];
        const double piv = s > 0.0 ? std::sqrt(s) : 0.0;
        M[j * kMaxAxes + j] = piv;
        for (int i = j + 1; i < n; ++i) {
            double t = M[i * kMaxAxes + j];
            for (int k = 0; k < j; ++k) t -= M[i * kMaxAxes + k] * M[j * kMaxAxes + k];
            M[i * kMaxAxes + j] = piv > 0.0 ? t / piv : 0.0;
        }
        for (int i = 0; i < j; ++i) M[i * kMaxAxes + j] = 0.0;
    }
}

struct Cubature {
    int dims = 0;
    std::vector<double> offsets;  // P × dims
    std::vector<double> weights;
};

Cubature cubature(const GaussianLaw& law, int n_gh) {
    Cubature c;
    c.dims = law.dims;
    const int D = law.dims;
    if (law.deterministic) {
        c.offsets.assign(D, 0.0);
        c.weights = {1.0};
        return c;
    }
    const auto gh = gauss_hermite_normal(n_gh);
    int P = 1;
    for (int a = 0; a < D; ++a) P *= n_gh;
    c.offsets.assign(static_cast<std::size_t>(P) * D, 0.0);
    c.weights.assign(P, 1.0);
    double xi[kMaxAxes];
    for (int p = 0; p < P; ++p) {
        int rem = p;
        for (int a = D - 1; a >= 0; --a) {
            const int j = rem % n_gh;
            rem /= n_gh;
            xi[a] = gh.nodes[j];
            c.weights[p] *= gh.weights[j];
        }
        for (int i = 0; i < D; ++i) {
            double s = 0.0;
            for (int k = 0; k <= i; ++k) s += law.L[i * kMaxAxes + k] * xi[k];
            c.offsets[static_cast<std::size_t>(p) * D + i] = s;
        }
    }
    return c;
}

void check_grid(const Interpolant& f, const PhaseGrid& grid, const GaussianLaw& law) {
    if (f.dims() != grid.dims() || law.dims != grid.dims())
        throw std::invalid_argument("convolution: field, grid and law dimensions differ");
}

}  // namespace

GaussianLaw make_law(LawKind kind, const PhaseGrid& grid, double nu, double tau, double drift) {
    if (tau < 0.0) throw std::invalid_argument("make_law: negative time");
    if (nu < 0.0) throw std::invalid_argument("make_law: negative viscosity");
    GaussianLaw law;
    const int D = grid.dims();
    law.dims = D;
    for (int i = 0; i < D; ++i) law.A[i * kMaxAxes + i] = 1.0;
    const bool inhom = grid.mode() == GridMode::inhomogeneous;
    const int d = grid.d();
    if (kind != LawKind::heat && inhom)
        for (int i = 0; i < d; ++i) law.A[i * kMaxAxes + d + i] = -drift * tau;
    if (kind == LawKind::transport || nu == 0.0 || tau == 0.0) {
        law.deterministic = true;
        return law;
    }
    std::array<double, kMaxAxes * kMaxAxes> S{};
    for (int i = 0; i < D; ++i) S[i * kMaxAxes + i] = 2.0 * nu * tau;
    if (kind == LawKind::kolmogorov && inhom) {
        for (int i = 0; i < d; ++i) {
            S[i * kMaxAxes + i] += 2.0 / 3.0 * drift * drift * nu * tau * tau * tau;
            S[i * kMaxAxes + d + i] = S[(d + i) * kMaxAxes + i] = -drift * nu * tau * tau;
        }
    }
    cholesky(S, D);
    law.L = S;
    law.deterministic = false;
    return law;
}

DensityField law_convolution(const DensityField& f, const GaussianLaw& law, const ConvolutionOptions& opts) {
    const Interpolant I(f, opts.interpolation);
    DensityField out = law_convolution(I, f.grid, law, opts);
    out.time = f.time;
    return out;
}

DensityField law_convolution(const Interpolant& f, const PhaseGrid& grid, const GaussianLaw& law,
                             const ConvolutionOptions& opts) {
    check_grid(f, grid, law);
    const Cubature c = cubature(law, opts.n_gh);
    const int D = law.dims;
    DensityField out(grid);
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        double z[kMaxAxes], y[kMaxAxes];
        for (std::size_t n = b; n < e; ++n) {
            grid.node_coords(n, z);
            double m[kMaxAxes];
            for (int i = 0; i < D; ++i) {
                double s = 0.0;
                for (int k = 0; k < D; ++k) s += law.A[i * kMaxAxes + k] * z[k];
                m[i] = s;
            }
            double acc = 0.0;
            for (std::size_t p = 0; p < c.weights.size(); ++p) {
                for (int i = 0; i < D; ++i) y[i] = m[i] + c.offsets[p * D + i];
                acc += c.weights[p] * f.value(y);
            }
            out.values[n] = acc;
        }
    });
    return out;
}

DensityField law_convolution_derivative(const Interpolant& f, const PhaseGrid& grid, const GaussianLaw& law,
                                        int axis, const ConvolutionOptions& opts) {
    check_grid(f, grid, law);
    if (axis < 0 || axis >= grid.dims()) throw std::invalid_argument("derivative axis out of range");
    const Cubature c = cubature(law, opts.n_gh);
    const int D = law.dims;
    DensityField out(grid);
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        double z[kMaxAxes], y[kMaxAxes], g[kMaxAxes];
        for (std::size_t n = b; n < e; ++n) {
            grid.node_coords(n, z);
            double m[kMaxAxes];
            for (int i = 0; i < D; ++i) {
                double s = 0.0;
                for (int k = 0; k < D; ++k) s += law.A[i * kMaxAxes + k] * z[k];
                m[i] = s;
            }
            double acc = 0.0;
            for (std::size_t p = 0; p < c.weights.size(); ++p) {
                for (int i = 0; i < D; ++i) y[i] = m[i] + c.offsets[p * D + i];
                f.value_and_gradient(y, g);
                double dj = 0.0;
                for (int j = 0; j < D; ++j) dj += law.A[j * kMaxAxes + axis] * g[j];
                acc += c.weights[p] * dj;
            }
            out.values[n] = acc;
        }
    });
    return out;
}

namespace {

// ∫ f(y) Γ(t, z; s, y) dy at every node z, trapezoid over the source grid.
std::vector<double> quadrature_pass(const DensityField& f, const KernelFn& kernel, double t, double s) {
    const PhaseGrid& g = f.grid;
    const int D = g.dims();
    std::vector<double> wy(g.size());
    std::vector<double> ycoord(g.size() * D);
    for (std::size_t j = 0; j < g.size(); ++j) {
        wy[j] = g.trapezoid_weight(j) * f.values[j];
        g.node_coords(j, &ycoord[j * D]);
    }
    std::vector<double> out(g.size(), 0.0);
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
        double z[kMaxAxes];
        for (std::size_t n = b; n < e; ++n) {
            g.node_coords(n, z);
            double acc = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j) {
                if (wy[j] == 0.0) continue;
                const double k = kernel(t, z, s, &ycoord[j * D]);
                if (!std::isfinite(k)) throw std::domain_error("convolution: non-finite kernel value");
                acc += wy[j] * k;
            }
            out[n] = acc;
        }
    });
    return out;
}

}  // namespace

DensityField generalized_convolution(const std::vector<DensityField>& slices, const KernelFn& kernel,
                                     ConvolutionMode mode, double t) {
    if (slices.empty()) throw std::invalid_argument("generalized_convolution: no source slices");
    const PhaseGrid& g = slices.front().grid;
    for (const auto& s : slices)
        if (!(s.grid == g)) throw std::invalid_argument("generalized_convolution: slices on different grids");
    DensityField out(g, t);
    if (mode == ConvolutionMode::spatial_only) {
        if (!(t > slices[0].time)) throw std::invalid_argument("generalized_convolution: requires t > s");
        out.values = quadrature_pass(slices[0], kernel, t, slices[0].time);
        return out;
    }
    const std::size_t M = slices.size();
    for (std::size_t j = 1; j < M; ++j)
        if (!(slices[j].time > slices[j - 1].time)) throw std::invalid_argument("generalized_convolution: slice times must increase");
    if (slices.back().time > t) throw std::invalid_argument("generalized_convolution: slices beyond t");
    auto accumulate = [&](const DensityField& f, double s, double w) {
        if (w == 0.0) return;
        const auto part = quadrature_pass(f, kernel, t, s);
        for (std::size_t n = 0; n < part.size(); ++n) out.values[n] += w * part[n];
    };
    const bool ends_at_t = slices.back().time == t;
    const std::size_t n_trap = ends_at_t ? (M >= 2 ? M - 2 : 0) : M - 1;
    // Trapezoid panels strictly before the singular endpoint.
    for (std::size_t j = 0; j < n_trap; ++j) {
        const double h = slices[j + 1].time - slices[j].time;
        accumulate(slices[j], slices[j].time, 0.5 * h);
        accumulate(slices[j + 1], slices[j + 1].time, 0.5 * h);
    }
    // Midpoint of the last panel.
    if (ends_at_t && M >= 2) {
        const DensityField& a = slices[M - 2];
        const DensityField& b = slices[M - 1];
        DensityField mid(g, 0.5 * (a.time + b.time));
        for (std::size_t n = 0; n < mid.size(); ++n) mid.values[n] = 0.5 * (a.values[n] + b.values[n]);
        accumulate(mid, mid.time, b.time - a.time);
    } else if (!ends_at_t) {
        const DensityField& a = slices.back();
        accumulate(a, 0.5 * (a.time + t), t - a.time);
    }
    return out;
}

}  // namespace boltzlab
