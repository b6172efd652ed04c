#pragma once

#include <optional>
#include <string>
#include <vector>

#include "boltzlab/collision.hpp"
#include "boltzlab/convolution.hpp"
#include "boltzlab/grid.hpp"

namespace boltzlab {

enum class Representation { parametrix, gaussian_split, transport_exact };
enum class KernelChoice { oracle, levy };

std::string to_string(Representation r);
Representation representation_from_string(const std::string& s);
std::string to_string(KernelChoice k);
KernelChoice kernel_choice_from_string(const std::string& s);

struct LocalSolveConfig {
    double nu = 1e-2;
    double delta = 0.1;
    double tol = 1e-8;
    int max_iter = 40;
    Representation representation = Representation::parametrix;
    KernelChoice kernel = KernelChoice::oracle;
    int levy_order = 3;
    int time_panels = 16;
    double s = 7.0;            // increments are measured at s, the solution at s − 1
    bool collisions = true;    // Q is identically zero in d = 1 regardless
    CollisionConfig collision = default_collision_config(2);
    ConvolutionOptions convolution;
    double levy_validity = 0.05;   // largest ν·Δ accepted with the Levy kernel
    double drift = 1.0;            // coefficient of v·∇_x; 0 suppresses transport
};

// Time-dependent scalar coefficients of
//   ∂_s U = c(s)[νΔU − v·∇_xU] + β(s) Q(U,U) − κ(s) U,
// with c and κ frozen per panel and β sampled at the nodes. An empty
// schedule means c = β = 1, κ = 0.
struct CoefficientSchedule {
    std::vector<double> panel_c;
    std::vector<double> panel_kappa;
    std::vector<double> node_c;      // c at the nodes, for the split drift source
    std::vector<double> node_beta;
    bool empty() const { return panel_c.empty(); }
};

// Solution on the time nodes t0 + iΔ/M, i = 0..M.
using Slices = std::vector<DensityField>;

struct IterationRecord {
    int k = 0;
    double norm = 0.0;    // ‖F_k − F_{k−1}‖ in the weighted sup,1 norm at exponent s
    double ratio = 0.0;   // norm_k / norm_{k−1}; NaN for k = 1
};

struct IterationTrace {
    double nu = 0.0;
    double delta = 0.0;
    std::vector<IterationRecord> records;
    double measured_ratio = 0.0;  // largest ratio above the rounding floor
    double visc_term = 0.0;       // sup over slices of |νΔF| at the final iterate
    double solution_norm = 0.0;   // sup over slices, sup,1 norm at exponent s − 1
    double min_value = 0.0;
    bool converged = false;
    bool diverged = false;
    std::string message;
};

struct LocalSolveResult {
    Slices slices;
    IterationTrace trace;
    const DensityField& final() const { return slices.back(); }
};

// One application of the mild-form map Φ: F_k = data term + source term.
Slices picard_step(const Slices& prev, const DensityField& F0, const LocalSolveConfig& cfg,
                   const CoefficientSchedule& sched = {});

LocalSolveResult solve_local(const DensityField& F0, const LocalSolveConfig& cfg,
                             const CoefficientSchedule& sched = {});

// max_i weighted_sup_norm(Φ(F)_i − F_i, s, with gradient).
double fixed_point_residual(const LocalSolveResult& r, const DensityField& F0, const LocalSolveConfig& cfg,
                            const CoefficientSchedule& sched = {});

struct DeltaSearch {
    std::vector<double> deltas;
    std::vector<double> ratios;
    double delta = 0.0;
    bool found = false;
    LocalSolveResult result;
};

// Halves Δ from cfg.delta until the measured ratio is at most target.
DeltaSearch select_delta(const DensityField& F0, LocalSolveConfig cfg, double target = 0.5, int max_halvings = 8);

struct SweepEntry {
    double nu = 0.0;
    double visc_term = 0.0;
    double diff_to_previous = 0.0;   // NaN for the first entry
    double oracle_error = 0.0;       // max|F^ν(Δ) − oracle| / max|F0|, NaN without oracle
    bool converged = false;
};

struct SweepReport {
    std::vector<SweepEntry> entries;
    double visc_exponent = 0.0;   // log-log slope of visc_term against ν
    bool visc_monotone = true;
    bool cauchy = true;           // consecutive differences decrease
    std::string message;
};

// `oracle` (optional) is evaluated at (x, v) and compared with F^ν(Δ).
SweepReport viscosity_sweep(const DensityField& F0, double delta, const std::vector<double>& nu_schedule,
                            LocalSolveConfig cfg, const PointFunction* oracle = nullptr);

// ∂_{z_axis} F(t0+Δ) with the derivative carried by the data and sources
// (axis is 0-based over the grid's axes).
DensityField derivative_field(const LocalSolveResult& r, const DensityField& F0, const LocalSolveConfig& cfg,
                              int axis, const CoefficientSchedule& sched = {});

}  // namespace boltzlab
