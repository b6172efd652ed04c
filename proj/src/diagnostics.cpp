#include "boltzlab/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "boltzlab/quadrature.hpp"
#include "boltzlab/sphere.hpp"

namespace boltzlab {

double entropy_phi(double r) {
    if (r == 0.0) return 1.0;
    const double u = r - 1.0;
    if (std::fabs(u) < 1e-4) {
        // (1+u)ln(1+u) − u = u²/2 − u³/6 + u⁴/12 − u⁵/20 + ...
        return u * u * (0.5 - u * (1.0 / 6.0 - u * (1.0 / 12.0 - u / 20.0)));
    }
    return r * std::log(r) - r + 1.0;
}

std::vector<double> relative_entropy_integrand(const DensityField& N, const DensityField& M) {
    if (!(N.grid == M.grid)) throw std::invalid_argument("relative_entropy: fields on different grids");
    std::vector<double> h(N.size());
    for (std::size_t n = 0; n < N.size(); ++n) {
        const double m = M.values[n];
        const double x = N.values[n];
        if (!(m > 0.0)) throw std::domain_error("relative_entropy: reference M must be strictly positive");
        if (x < 0.0) throw std::domain_error("relative_entropy: N must be nonnegative");
        h[n] = x == m ? 0.0 : m * entropy_phi(x / m);
    }
    return h;
}

double relative_entropy(const DensityField& N, const DensityField& M, double cutoff) {
    const auto h = relative_entropy_integrand(N, M);
    double acc = 0.0;
    for (std::size_t n = 0; n < h.size(); ++n) {
        if (h[n] < 0.0) throw std::logic_error("relative_entropy: negative integrand");
        if (cutoff > 0.0 && N.grid.radius(n) > cutoff) continue;
        acc += N.grid.trapezoid_weight(n) * h[n];
    }
    return acc;
}

double reference_gaussian_value(const double* z, int d) {
    double x2 = 0.0;
    for (int i = 0; i < d; ++i) x2 += z[i] * z[i];
    return std::pow(2.0 * std::numbers::pi, -0.5 * d) * std::exp(-0.5 * x2);
}

DensityField reference_gaussian(const PhaseGrid& grid) {
    if (grid.mode() != GridMode::inhomogeneous)
        throw std::invalid_argument("reference_gaussian: needs position axes (inhomogeneous grid)");
    const int d = grid.d();
    return sample_field([d](const double* z) { return reference_gaussian_value(z, d); }, grid);
}

EntropyScan entropy_divergence_scan(double s, const std::vector<double>& cutoffs, const EntropyScanOptions& opts) {
    const int d = opts.d;
    if (d < 1 || d > 3) throw std::invalid_argument("entropy scan: d must be 1, 2 or 3");
    if (!(s > 2.0 * d)) throw std::invalid_argument("entropy scan: requires s > 2d so that p is integrable");
    if (cutoffs.empty()) throw std::invalid_argument("entropy scan: no cutoffs");
    for (std::size_t i = 0; i < cutoffs.size(); ++i)
        if (!(cutoffs[i] > 0.0) || (i > 0 && !(cutoffs[i] > cutoffs[i - 1])))
            throw std::invalid_argument("entropy scan: cutoffs must be positive and increasing");

    const double pi = std::numbers::pi;
    const double S = sphere_measure(d);
    const double lognorm = -0.5 * d * std::log(2.0 * pi);
    const auto ang = gauss_legendre(opts.angular_nodes, 0.0, 0.5 * pi);
    std::vector<double> aw(ang.nodes.size()), ac(ang.nodes.size());
    double lead_ang = 0.0;
    for (std::size_t q = 0; q < ang.nodes.size(); ++q) {
        const double c = std::cos(ang.nodes[q]), sn = std::sin(ang.nodes[q]);
        aw[q] = ang.weights[q] * std::pow(c, d - 1) * std::pow(sn, d - 1);
        ac[q] = c;
        lead_ang += aw[q] * c * c;
    }

    EntropyScan out;
    out.s = s;
    out.d = d;
    out.cutoffs = cutoffs;
    std::vector<double> lead;
    for (double c : cutoffs) {
        const int panels = std::max(1, static_cast<int>(std::ceil(c * opts.radial_panels_per_unit)));
        const auto radial = [&](double r, int which) {
            const double rs = std::pow(r, s);
            const double p = 1.0 / (1.0 + rs);
            const double lnp = -std::log1p(rs);
            double data = 0.0, ref = 0.0;
            for (std::size_t q = 0; q < aw.size(); ++q) {
                const double x = r * ac[q];
                const double lnG = lognorm - 0.5 * x * x;
                const double G = std::exp(lnG);
                // With N = G the data part is G ln(G/G) − G = −G.
                data += aw[q] * (opts.reference_profile ? -G : p * (lnp - lnG) - p);
                ref += aw[q] * G;
            }
            const double jac = S * S * std::pow(r, 2 * d - 1);
            return jac * (which == 0 ? data : ref);
        };
        const double dp = integrate_gl([&](double r) { return radial(r, 0); }, 0.0, c, panels, opts.radial_order);
        const double rp = integrate_gl([&](double r) { return radial(r, 1); }, 0.0, c, panels, opts.radial_order);
        out.data_part.push_back(dp);
        out.reference_part.push_back(rp);
        // Per node the reference profile gives −G + G; keep that exact zero.
        out.values.push_back(opts.reference_profile ? 0.0 : dp + rp);
        lead.push_back(S * S * lead_ang *
                       integrate_gl([&](double r) { return std::pow(r, 2 * d + 1) / (2.0 * (1.0 + std::pow(r, s))); },
                                    0.0, c, panels, opts.radial_order));
    }

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lead.size(); ++i) {
        num += out.data_part[i] * lead[i];
        den += lead[i] * lead[i];
    }
    out.slope_fit = den > 0.0 ? num / den : 0.0;
    const std::size_t n = cutoffs.size();
    if (n >= 2 && out.data_part[n - 1] > 0.0 && out.data_part[n - 2] > 0.0)
        out.growth_exponent = std::log(out.data_part[n - 1] / out.data_part[n - 2]) / std::log(cutoffs[n - 1] / cutoffs[n - 2]);

    auto strictly_up = [](const std::vector<double>& v, bool& inc, bool& incinc) {
        inc = v.size() >= 2;
        incinc = v.size() >= 3;
        for (std::size_t i = 1; i < v.size(); ++i) {
            if (!(v[i] > v[i - 1])) inc = false;
            if (i >= 2 && !(v[i] - v[i - 1] > v[i - 1] - v[i - 2])) incinc = false;
        }
    };
    bool dinc = false, dincinc = false;
    strictly_up(out.values, out.increasing, out.increments_increasing);
    strictly_up(out.data_part, dinc, dincinc);
    out.diverging = !opts.reference_profile && dinc && dincinc;
    std::ostringstream os;
    os << (out.diverging ? "data part grows with increasing increments (unbounded)"
                         : "data part does not show unbounded growth");
    os << "; reference Gaussian is constant in v, so its ball integral grows with the v-volume";
    out.message = os.str();
    return out;
}

EntropyProductionTrace entropy_production_trace(const std::vector<DensityField>& slices, const CollisionConfig& cfg,
                                                double tol) {
    EntropyProductionTrace tr;
    for (const auto& F : slices) {
        const PhaseGrid& g = F.grid;
        const PhaseGrid vg = g.velocity_grid();
        const std::size_t nv = g.velocity_size();
        double acc = 0.0;
        int xi[kMaxAxes];
        for (std::size_t xs = 0; xs < g.space_size(); ++xs) {
            const double* slice = F.values.data() + xs * nv;
            bool zero = true;
            for (std::size_t j = 0; j < nv; ++j) zero = zero && slice[j] == 0.0;
            if (zero) continue;  // empty gas: R(0) = 0 by convention
            double wx = 1.0;
            if (g.mode() == GridMode::inhomogeneous) {
                g.unflatten(xs * nv, xi);
                for (int a = 0; a < g.d(); ++a) {
                    const bool edge = xi[a] == 0 || xi[a] == g.n(a) - 1;
                    wx *= edge ? 0.5 * g.h(a) : g.h(a);
                }
            }
            acc += wx * entropy_production(slice, vg, cfg);
        }
        tr.times.push_back(F.time);
        tr.rates.push_back(acc);
    }
    double cum = 0.0;
    tr.min_rate = tr.rates.empty() ? 0.0 : tr.rates[0];
    for (std::size_t i = 0; i < tr.rates.size(); ++i) {
        if (i > 0) {
            const double inc = 0.5 * (tr.times[i] - tr.times[i - 1]) * (tr.rates[i] + tr.rates[i - 1]);
            if (inc < -tol * std::max(1e-300, tr.times[i] - tr.times[i - 1])) tr.cumulative_nondecreasing = false;
            cum += inc;
        }
        tr.cumulative.push_back(cum);
        tr.min_rate = std::min(tr.min_rate, tr.rates[i]);
        if (tr.rates[i] < -tol) tr.nonnegative = false;
    }
    return tr;
}

}  // namespace boltzlab
