#pragma once

#include <string>
#include <utility>
#include <vector>

#include "boltzlab/grid.hpp"
#include "boltzlab/iteration.hpp"

namespace boltzlab {

// s = Δt/√(1−Δt²) and ds/dt = (1−Δt²)^{−3/2} with Δt = t − t0 ∈ [0, 1).
std::pair<double, double> dilate_time(double t, double t0);
// Inverse map Δt = s/√(1+s²).
double undilate_time(double s);
// Length of the dilated interval carrying [t0, t0 + Δ0].
double dilated_length(double delta0);

// U = F/(1+t), stamped with the dilated time s.
DensityField transform_to_U(const DensityField& F, double t, double t0);
// F = (1+t)U with t = t0 + Δt(U.time).
DensityField transform_back(const DensityField& U, double t0);

struct ContinuationConfig {
    double T = 1.0;
    double C = 0.0;          // <= 0 selects max(1, 2‖F0‖)
    double delta0 = 0.25;
    double positivity_tol = 1e-6;   // relative to max|F|
    LocalSolveConfig local;
};

// Throws unless 0 < Δ0 < 1 and Δ0 ≤ 1/(1+T)².
void validate_continuation(const ContinuationConfig& cfg);

struct DampedSolve {
    LocalSolveResult result;     // slices of U on the dilated nodes
    std::vector<double> s_nodes, t_nodes;
    double end_norm = 0.0;       // ‖U(Δ_d)‖ at exponent s − 1
};

// The damped, time-rescaled equation for U on [0, Δ_d]:
//   U_s = c(νΔU − v·∇_xU) + c(1+t) Q(U,U) − c/(1+t) U,  c = (1−Δt²)^{3/2},
// with c and c/(1+t) frozen at panel midpoints.
DampedSolve damped_local_solve(const DensityField& U0, double t0, double delta0, const LocalSolveConfig& cfg);
CoefficientSchedule damped_schedule(double t0, double delta0, int panels);

struct Checkpoint {
    double t = 0.0;
    double norm = 0.0;
    double bound = 0.0;
    bool pass = false;
    double min_value = 0.0;
    bool positive = false;
};

struct ContinuationReport {
    double C = 0.0;
    std::vector<Checkpoint> checkpoints;
    std::vector<double> step_margins;   // C − ‖U(Δ_d)‖ per step
    int failed_step = -1;
    bool success = false;
    std::string message;
};

ContinuationReport continue_global(const DensityField& F0, const ContinuationConfig& cfg);

std::pair<double, bool> positivity_monitor(const DensityField& F, double tol);

}  // namespace boltzlab
