#pragma once

#include <vector>

#include "boltzlab/kernels.hpp"

namespace boltzlab {

struct LevyOptions {
    int n_sigma = 8;         // Gauss–Legendre nodes per time integral
    int n_gh = 5;            // Gauss–Hermite nodes per phase axis
    double rel_tol = 1e-6;   // refinement tolerance for the flagged check
    bool verify = false;     // repeat every evaluation at (n_sigma+2, n_gh+1)
    double drift = 1.0;      // coefficient of v·∇_x; 0 suppresses transport
};

// Truncated parametrix for ∂_tΓ = νΔΓ − v·∇_xΓ on the 2d-dimensional phase
// space: Γ_K = G + Σ_{k≤K} (−1)^k G∗L_k with L_1 = v·∇_x G and
// L_{k+1} = L_1∗L_k (the sign of the drift is carried by (−1)^k).
//
// Every space-time convolution is rewritten with the Gaussian bridge
// G(t−σ, z−ζ)G(σ−s, ζ−y) = G(t−s, z−y)·B_σ(ζ), so the nested integrals
// become polynomial expectations that Gauss–Legendre × Gauss–Hermite
// evaluates without meshing.
class LevyKernel {
public:
    LevyKernel(int K, double nu, int d, LevyOptions opts = {});

    int order() const { return K_; }
    double nu() const { return nu_; }
    int d() const { return d_; }
    const LevyOptions& options() const { return opts_; }

    // L_k(t, z; s, y).
    double term(int k, double t, const double* z, double s, const double* y, bool* flagged = nullptr) const;
    // (G∗L_k)(t, z; s, y).
    double convolved_term(int k, double t, const double* z, double s, const double* y,
                          bool* flagged = nullptr) const;
    double value(double t, const double* z, double s, const double* y, bool* flagged = nullptr) const;
    // S_0 = G, S_j = G + Σ_{k ≤ j} (−1)^k G∗L_k for j = 0..K.
    std::vector<double> partial_sums(double t, const double* z, double s, const double* y,
                                     bool* flagged = nullptr) const;

    // Forward kernel plus the adjoint built from the reversed-drift expansion
    // evaluated with exchanged arguments.
    KernelEvaluator evaluator() const;

private:
    double ell(int k, double t, const double* z, double s, const double* y, int level) const;
    double bridge_mean_ell(int k, double t, const double* z, double s, const double* y, int level) const;
    double with_check(int k, double t, const double* z, double s, const double* y, bool conv, bool* flagged) const;

    int K_;
    double nu_;
    int d_;
    LevyOptions opts_;
    struct Rules {
        std::vector<double> gl_x, gl_w;      // on [0, 1]
        std::vector<double> gh_x, gh_w;      // standard normal
    };
    Rules rules_[2];
};

double levy_term(int k, double t, const double* z, double s, const double* y, double nu, int d,
                 const LevyOptions& opts = {}, bool* flagged = nullptr);

}  // namespace boltzlab
