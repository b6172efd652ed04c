#include "boltzlab/continuation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace boltzlab {

std::pair<double, double> dilate_time(double t, double t0) {
    const double dt = t - t0;
    if (!(dt >= 0.0 && dt < 1.0)) throw std::domain_error("dilate_time: requires 0 <= t - t0 < 1");
    const double q = 1.0 - dt * dt;
    return {dt / std::sqrt(q), 1.0 / (q * std::sqrt(q))};
}

double undilate_time(double s) {
    if (s < 0.0) throw std::domain_error("undilate_time: negative dilated time");
    return s / std::sqrt(1.0 + s * s);
}

double dilated_length(double delta0) { return dilate_time(delta0, 0.0).first; }

DensityField transform_to_U(const DensityField& F, double t, double t0) {
    DensityField U = F;
    const double f = 1.0 / (1.0 + t);
    for (double& x : U.values) x *= f;
    U.time = dilate_time(t, t0).first;
    return U;
}

DensityField transform_back(const DensityField& U, double t0) {
    DensityField F = U;
    const double t = t0 + undilate_time(U.time);
    for (double& x : F.values) x *= 1.0 + t;
    F.time = t;
    return F;
}

void validate_continuation(const ContinuationConfig& cfg) {
    if (!(cfg.T > 0.0)) throw std::invalid_argument("continuation: T must be positive");
    if (!(cfg.delta0 > 0.0 && cfg.delta0 < 1.0)) throw std::invalid_argument("continuation: delta0 must lie in (0,1)");
    const double rule = 1.0 / ((1.0 + cfg.T) * (1.0 + cfg.T));
    if (cfg.delta0 > rule * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "continuation: delta0 = " << cfg.delta0 << " violates the step rule delta0 <= 1/(1+T)^2 = " << rule;
        throw std::invalid_argument(os.str());
    }
}

CoefficientSchedule damped_schedule(double t0, double delta0, int panels) {
    CoefficientSchedule sc;
    const double sd = dilated_length(delta0);
    const double ds = sd / panels;
    auto c_at = [](double s) {
        const double dt = undilate_time(s);
        const double q = 1.0 - dt * dt;
        return q * std::sqrt(q);
    };
    for (int p = 0; p < panels; ++p) {
        const double sm = (p + 0.5) * ds;
        const double c = c_at(sm);
        sc.panel_c.push_back(c);
        sc.panel_kappa.push_back(c / (1.0 + t0 + undilate_time(sm)));
    }
    for (int i = 0; i <= panels; ++i) {
        const double s = i * ds;
        const double c = c_at(s);
        sc.node_c.push_back(c);
        sc.node_beta.push_back((1.0 + t0 + undilate_time(s)) * c);
    }
    return sc;
}

DampedSolve damped_local_solve(const DensityField& U0, double t0, double delta0, const LocalSolveConfig& cfg) {
    LocalSolveConfig lc = cfg;
    lc.delta = dilated_length(delta0);
    DensityField start = U0;
    start.time = 0.0;
    DampedSolve out;
    out.result = solve_local(start, lc, damped_schedule(t0, delta0, lc.time_panels));
    for (const auto& f : out.result.slices) {
        out.s_nodes.push_back(f.time);
        out.t_nodes.push_back(t0 + undilate_time(f.time));
    }
    out.end_norm = weighted_sup_norm(out.result.final(), cfg.s - 1.0, true);
    return out;
}

std::pair<double, bool> positivity_monitor(const DensityField& F, double tol) {
    const double m = min_value(F);
    return {m, m >= -tol};
}

ContinuationReport continue_global(const DensityField& F0, const ContinuationConfig& cfg) {
    validate_continuation(cfg);
    ContinuationReport rep;
    const double s1 = cfg.local.s - 1.0;
    const double n0 = weighted_sup_norm(F0, s1, true);
    rep.C = cfg.C > 0.0 ? cfg.C : std::max(1.0, 2.0 * n0);
    if (n0 > rep.C) throw std::invalid_argument("continue_global: initial norm exceeds C");
    const double ratio = cfg.T / cfg.delta0;
    const int steps = static_cast<int>(std::floor(ratio + 1e-9));

    auto checkpoint = [&](const DensityField& F, double t) {
        Checkpoint c;
        c.t = t;
        c.norm = weighted_sup_norm(F, s1, true);
        c.bound = rep.C * (1.0 + t);
        c.pass = c.norm <= c.bound;
        const auto [mn, pos] = positivity_monitor(F, cfg.positivity_tol * max_abs(F));
        c.min_value = mn;
        c.positive = pos;
        return c;
    };

    DensityField F = F0;
    F.time = 0.0;
    rep.checkpoints.push_back(checkpoint(F, 0.0));
    std::ostringstream os;
    for (int k = 0; k < steps; ++k) {
        const double t0 = k * cfg.delta0;
        const DensityField U0 = transform_to_U(F, t0, t0);
        const DampedSolve ds = damped_local_solve(U0, t0, cfg.delta0, cfg.local);
        rep.step_margins.push_back(rep.C - ds.end_norm);
        bool ok = ds.result.trace.converged;
        for (std::size_t i = 1; i < ds.result.slices.size(); ++i) {
            const DensityField Fi = transform_back(ds.result.slices[i], t0);
            const Checkpoint c = checkpoint(Fi, Fi.time);
            ok = ok && c.pass && c.positive;
            rep.checkpoints.push_back(c);
        }
        if (ds.end_norm > rep.C) ok = false;
        F = transform_back(ds.result.final(), t0);
        F.time = (k + 1) * cfg.delta0;
        if (!ok) {
            rep.failed_step = k;
            os << "step " << k << " failed: ";
            if (!ds.result.trace.converged) os << ds.result.trace.message;
            else if (ds.end_norm > rep.C) os << "|U(delta_d)| = " << ds.end_norm << " exceeds C = " << rep.C;
            else os << "checkpoint bound or positivity violated";
            rep.message = os.str();
            return rep;
        }
    }
    rep.success = true;
    os << "all " << rep.checkpoints.size() << " checkpoints satisfy |F(t)| <= C(1+t) with C = " << rep.C;
    rep.message = os.str();
    return rep;
}

}  // namespace boltzlab
