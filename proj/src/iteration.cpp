#include "boltzlab/iteration.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "boltzlab/levy.hpp"

namespace boltzlab {

std::string to_string(Representation r) {
    switch (r) {
        case Representation::parametrix: return "parametrix";
        case Representation::gaussian_split: return "gaussian-split";
        case Representation::transport_exact: return "transport-exact";
    }
    return "parametrix";
}

Representation representation_from_string(const std::string& s) {
    if (s == "parametrix") return Representation::parametrix;
    if (s == "gaussian-split" || s == "gaussian_split") return Representation::gaussian_split;
    if (s == "transport-exact" || s == "transport_exact") return Representation::transport_exact;
    throw std::invalid_argument("unknown representation '" + s + "'");
}

std::string to_string(KernelChoice k) { return k == KernelChoice::levy ? "levy" : "oracle"; }

KernelChoice kernel_choice_from_string(const std::string& s) {
    if (s == "oracle") return KernelChoice::oracle;
    if (s == "levy") return KernelChoice::levy;
    throw std::invalid_argument("unknown kernel '" + s + "'");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

DensityField difference(const DensityField& a, const DensityField& b) {
    DensityField out(a.grid, a.time);
    for (std::size_t n = 0; n < a.size(); ++n) out.values[n] = a.values[n] - b.values[n];
    return out;
}

double slices_norm(const Slices& a, const Slices& b, double s) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, weighted_sup_norm(difference(a[i], b[i]), s, true));
    return m;
}

// The mild-form map for one local interval, with everything that does not
// depend on the iterate computed once.
class MildMap {
public:
    MildMap(const DensityField& F0, const LocalSolveConfig& cfg, const CoefficientSchedule& sched)
        : F0_(F0), cfg_(cfg), grid_(F0.grid) {
        if (!(cfg.delta > 0.0)) throw std::invalid_argument("local solve: delta must be positive");
        if (!(cfg.tol > 0.0)) throw std::invalid_argument("local solve: tol must be positive");
        if (cfg.time_panels < 1) throw std::invalid_argument("local solve: time_panels must be >= 1");
        if (cfg.nu < 0.0) throw std::invalid_argument("local solve: nu must be nonnegative");
        M_ = cfg.time_panels;
        ds_ = cfg.delta / M_;
        c_.assign(M_, 1.0);
        kappa_.assign(M_, 0.0);
        node_c_.assign(M_ + 1, 1.0);
        beta_.assign(M_ + 1, 1.0);
        if (!sched.empty()) {
            if (static_cast<int>(sched.panel_c.size()) != M_ || static_cast<int>(sched.panel_kappa.size()) != M_ ||
                static_cast<int>(sched.node_c.size()) != M_ + 1 || static_cast<int>(sched.node_beta.size()) != M_ + 1)
                throw std::invalid_argument("coefficient schedule does not match the time panels");
            c_ = sched.panel_c;
            kappa_ = sched.panel_kappa;
            node_c_ = sched.node_c;
            beta_ = sched.node_beta;
        }
        // Cumulative effective time and damping from node 0.
        cum_tau_.assign(M_ + 1, 0.0);
        cum_kappa_.assign(M_ + 1, 0.0);
        for (int p = 0; p < M_; ++p) {
            cum_tau_[p + 1] = cum_tau_[p] + c_[p] * ds_;
            cum_kappa_[p + 1] = cum_kappa_[p] + kappa_[p] * ds_;
        }
        collisions_ = cfg.collisions && grid_.d() >= 2;
        drift_source_ = cfg.representation == Representation::gaussian_split &&
                        grid_.mode() == GridMode::inhomogeneous && cfg.drift != 0.0;
        if (cfg.kernel == KernelChoice::levy) {
            if (cfg.representation != Representation::parametrix)
                throw std::invalid_argument("the Levy kernel is only available in the parametrix representation");
            if (grid_.mode() != GridMode::inhomogeneous)
                throw std::invalid_argument("the Levy kernel needs an inhomogeneous grid");
            if (collisions_)
                throw std::invalid_argument("the Levy kernel is only supported for vanishing collision source (d = 1)");
            if (cfg.nu * cum_tau_[M_] > cfg.levy_validity) {
                std::ostringstream os;
                os << "nu*delta = " << cfg.nu * cum_tau_[M_] << " exceeds the Levy validity region "
                   << cfg.levy_validity << "; use a smaller delta or the oracle kernel";
                throw std::invalid_argument(os.str());
            }
            LevyOptions lo;
            lo.drift = cfg.drift;
            levy_ = std::make_unique<LevyKernel>(cfg.levy_order, cfg.nu, grid_.d(), lo);
        }
        data_.reserve(M_ + 1);
        for (int i = 0; i <= M_; ++i) {
            DensityField f = propagate(F0, 0, i);
            f.time = F0.time + i * ds_;
            data_.push_back(std::move(f));
        }
    }

    int panels() const { return M_; }
    bool has_source() const { return collisions_ || drift_source_; }
    double node_time(int i) const { return F0_.time + i * ds_; }

    double damping(int j, int i) const { return std::exp(-(cum_kappa_[i] - cum_kappa_[j])); }
    GaussianLaw law(int j, int i) const {
        const double tau = cum_tau_[i] - cum_tau_[j];
        switch (cfg_.representation) {
            case Representation::parametrix: return make_law(LawKind::kolmogorov, grid_, cfg_.nu, tau, cfg_.drift);
            case Representation::gaussian_split: return make_law(LawKind::heat, grid_, cfg_.nu, tau);
            case Representation::transport_exact: return make_law(LawKind::transport, grid_, 0.0, tau, cfg_.drift);
        }
        return make_law(LawKind::heat, grid_, cfg_.nu, tau);
    }

    // e^{−K(j,i)} P(τ(j,i)) f
    DensityField propagate(const DensityField& f, int j, int i) const {
        DensityField out(grid_);
        if (i == j) {
            out.values = f.values;
        } else if (levy_) {
            DensityField src = f;
            src.time = 0.0;
            const LevyKernel& lk = *levy_;
            const KernelFn k = [&lk](double t, const double* z, double s, const double* y) { return lk.value(t, z, s, y); };
            out = generalized_convolution({src}, k, ConvolutionMode::spatial_only, cum_tau_[i] - cum_tau_[j]);
        } else {
            const Interpolant I(f, cfg_.convolution.interpolation);
            out = law_convolution(I, grid_, law(j, i), cfg_.convolution);
        }
        const double e = damping(j, i);
        if (e != 1.0)
            for (double& x : out.values) x *= e;
        return out;
    }

    DensityField source(const DensityField& U, int j) const {
        DensityField S(grid_, U.time);
        if (collisions_) {
            const DensityField Q = collision_field(U, cfg_.collision);
            for (std::size_t n = 0; n < S.size(); ++n) S.values[n] = beta_[j] * Q.values[n];
        }
        if (drift_source_) {
            const int d = grid_.d();
            double z[kMaxAxes];
            for (int a = 0; a < d; ++a) {
                const auto g = gradient_component(U, a);
                for (std::size_t n = 0; n < S.size(); ++n) {
                    grid_.node_coords(n, z);
                    S.values[n] -= cfg_.drift * node_c_[j] * z[d + a] * g[n];
                }
            }
        }
        return S;
    }

    double weight(int j, int i) const {
        if (i == 0) return 0.0;
        return (j == 0 || j == i) ? 0.5 * ds_ : ds_;
    }

    Slices apply(const Slices& prev) const {
        if (static_cast<int>(prev.size()) != M_ + 1) throw std::invalid_argument("picard step: wrong number of slices");
        Slices out = data_;
        if (!has_source()) return out;
        for (int j = 0; j <= M_; ++j) {
            const DensityField S = source(prev[j], j);
            if (max_abs(S) == 0.0) continue;
            const Interpolant I(S, cfg_.convolution.interpolation);
            for (int i = std::max(j, 1); i <= M_; ++i) {
                const double w = weight(j, i) * damping(j, i);
                if (i == j) {
                    for (std::size_t n = 0; n < S.size(); ++n) out[i].values[n] += w * S.values[n];
                } else {
                    const DensityField P = law_convolution(I, grid_, law(j, i), cfg_.convolution);
                    for (std::size_t n = 0; n < S.size(); ++n) out[i].values[n] += w * P.values[n];
                }
            }
        }
        return out;
    }

    DensityField derivative(const Slices& sol, int axis) const {
        if (levy_) throw std::invalid_argument("derivative_field is not available with the Levy kernel");
        const ConvolutionOptions& co = cfg_.convolution;
        DensityField out = law_convolution_derivative(Interpolant(F0_, co.interpolation), grid_, law(0, M_), axis, co);
        const double e0 = damping(0, M_);
        for (double& x : out.values) x *= e0;
        if (has_source()) {
            for (int j = 0; j <= M_; ++j) {
                const DensityField S = source(sol[j], j);
                if (max_abs(S) == 0.0) continue;
                const DensityField P =
                    law_convolution_derivative(Interpolant(S, co.interpolation), grid_, law(j, M_), axis, co);
                const double w = weight(j, M_) * damping(j, M_);
                for (std::size_t n = 0; n < out.size(); ++n) out.values[n] += w * P.values[n];
            }
        }
        out.time = node_time(M_);
        return out;
    }

    Slices initial_guess() const {
        Slices s;
        for (int i = 0; i <= M_; ++i) {
            DensityField f = F0_;
            f.time = node_time(i);
            s.push_back(std::move(f));
        }
        return s;
    }

private:
    const DensityField& F0_;
    const LocalSolveConfig& cfg_;
    PhaseGrid grid_;
    int M_ = 16;
    double ds_ = 0.0;
    std::vector<double> c_, kappa_, node_c_, beta_, cum_tau_, cum_kappa_;
    bool collisions_ = false, drift_source_ = false;
    std::unique_ptr<LevyKernel> levy_;
    Slices data_;
};

double line_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return kNaN;
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
    return sxx > 0.0 ? sxy / sxx : kNaN;
}

}  // namespace

Slices picard_step(const Slices& prev, const DensityField& F0, const LocalSolveConfig& cfg,
                   const CoefficientSchedule& sched) {
    const MildMap map(F0, cfg, sched);
    return map.apply(prev);
}

LocalSolveResult solve_local(const DensityField& F0, const LocalSolveConfig& cfg, const CoefficientSchedule& sched) {
    for (double x : F0.values)
        if (!std::isfinite(x)) throw std::domain_error("solve_local: non-finite initial data");
    const MildMap map(F0, cfg, sched);
    LocalSolveResult r;
    IterationTrace& tr = r.trace;
    tr.nu = cfg.nu;
    tr.delta = cfg.delta;
    Slices cur = map.initial_guess();
    const double floor = 1e-12 * std::max(weighted_sup_norm(F0, cfg.s, true), 1e-300);
    int streak = 0;
    for (int k = 1; k <= cfg.max_iter; ++k) {
        Slices next = map.apply(cur);
        IterationRecord rec;
        rec.k = k;
        rec.norm = slices_norm(next, cur, cfg.s);
        rec.ratio = kNaN;
        if (!tr.records.empty()) {
            const double prev = tr.records.back().norm;
            rec.ratio = prev > 0.0 ? rec.norm / prev : 0.0;
            if (prev > floor && rec.norm > floor) tr.measured_ratio = std::max(tr.measured_ratio, rec.ratio);
            streak = rec.ratio >= 1.0 && prev > floor ? streak + 1 : 0;
        }
        tr.records.push_back(rec);
        cur = std::move(next);
        if (rec.norm <= cfg.tol) {
            tr.converged = true;
            break;
        }
        if (streak >= 3) {
            tr.diverged = true;
            break;
        }
        if (!map.has_source()) {
            // Without a source the map is constant, so the next increment is
            // exactly zero; record it and stop.
            tr.records.push_back({k + 1, 0.0, 0.0});
            tr.converged = true;
            break;
        }
    }
    r.slices = std::move(cur);
    double vt = 0.0, sn = 0.0, mn = std::numeric_limits<double>::infinity();
    for (const auto& f : r.slices) {
        if (cfg.nu > 0.0 && cfg.representation != Representation::transport_exact) {
            bool ok = true;
            for (int a = 0; a < f.grid.dims(); ++a) ok = ok && f.grid.n(a) >= 5;
            if (ok) vt = std::max(vt, cfg.nu * max_abs(laplacian(f)));
        }
        sn = std::max(sn, weighted_sup_norm(f, cfg.s - 1.0, true));
        mn = std::min(mn, min_value(f));
    }
    tr.visc_term = vt;
    tr.solution_norm = sn;
    tr.min_value = mn;
    std::ostringstream os;
    if (tr.converged)
        os << "converged after " << tr.records.size() << " iterations";
    else if (tr.diverged)
        os << "diverged: contraction ratio >= 1 for 3 consecutive iterates; reduce delta";
    else
        os << "not converged after " << cfg.max_iter << " iterations";
    tr.message = os.str();
    return r;
}

double fixed_point_residual(const LocalSolveResult& r, const DensityField& F0, const LocalSolveConfig& cfg,
                            const CoefficientSchedule& sched) {
    const MildMap map(F0, cfg, sched);
    return slices_norm(map.apply(r.slices), r.slices, cfg.s);
}

DeltaSearch select_delta(const DensityField& F0, LocalSolveConfig cfg, double target, int max_halvings) {
    DeltaSearch out;
    for (int h = 0; h <= max_halvings; ++h) {
        LocalSolveResult r = solve_local(F0, cfg);
        out.deltas.push_back(cfg.delta);
        out.ratios.push_back(r.trace.measured_ratio);
        if (!r.trace.diverged && r.trace.measured_ratio <= target) {
            out.found = true;
            out.delta = cfg.delta;
            out.result = std::move(r);
            return out;
        }
        out.result = std::move(r);
        cfg.delta *= 0.5;
    }
    out.delta = out.deltas.back();
    return out;
}

SweepReport viscosity_sweep(const DensityField& F0, double delta, const std::vector<double>& nu_schedule,
                            LocalSolveConfig cfg, const PointFunction* oracle) {
    SweepReport rep;
    if (nu_schedule.empty()) throw std::invalid_argument("viscosity_sweep: empty schedule");
    for (std::size_t i = 1; i < nu_schedule.size(); ++i)
        if (!(nu_schedule[i] < nu_schedule[i - 1])) throw std::invalid_argument("viscosity_sweep: schedule must decrease");
    cfg.delta = delta;
    const double f0max = max_abs(F0);
    DensityField prev;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < nu_schedule.size(); ++i) {
        cfg.nu = nu_schedule[i];
        const LocalSolveResult r = solve_local(F0, cfg);
        SweepEntry e;
        e.nu = cfg.nu;
        e.visc_term = r.trace.visc_term;
        e.converged = r.trace.converged;
        const DensityField& F = r.final();
        e.diff_to_previous = i == 0 ? kNaN : weighted_sup_norm(difference(F, prev), cfg.s - 1.0, true);
        e.oracle_error = kNaN;
        if (oracle) {
            double err = 0.0, z[kMaxAxes];
            for (std::size_t n = 0; n < F.size(); ++n) {
                F.grid.node_coords(n, z);
                err = std::max(err, std::fabs(F.values[n] - (*oracle)(z)));
            }
            e.oracle_error = f0max > 0.0 ? err / f0max : err;
        }
        if (e.visc_term > 0.0) {
            lx.push_back(std::log(e.nu));
            ly.push_back(std::log(e.visc_term));
        }
        rep.entries.push_back(e);
        prev = F;
    }
    for (std::size_t i = 1; i < rep.entries.size(); ++i) {
        if (!(rep.entries[i].visc_term < rep.entries[i - 1].visc_term)) rep.visc_monotone = false;
        if (i >= 2 && !(rep.entries[i].diff_to_previous < rep.entries[i - 1].diff_to_previous)) rep.cauchy = false;
    }
    rep.visc_exponent = line_slope(lx, ly);
    std::ostringstream os;
    if (!rep.visc_monotone) os << "viscosity term magnitudes are not monotone; ";
    os << (rep.cauchy ? "consecutive differences decrease" : "consecutive differences do not decrease");
    rep.message = os.str();
    return rep;
}

DensityField derivative_field(const LocalSolveResult& r, const DensityField& F0, const LocalSolveConfig& cfg,
                              int axis, const CoefficientSchedule& sched) {
    const MildMap map(F0, cfg, sched);
    return map.derivative(r.slices, axis);
}

}  // namespace boltzlab
