#pragma once

#include <array>
#include <string>
#include <vector>

#include "boltzlab/grid.hpp"
#include "boltzlab/interpolation.hpp"
#include "boltzlab/kernels.hpp"

namespace boltzlab {

// Gaussian transition law seen from the output point: for a node z the
// kernel Γ(τ; z, ·) is the law of Y = A z + L ξ with ξ standard normal.
// Convolving a field with Γ is then E f(Y).
struct GaussianLaw {
    int dims = 0;
    std::array<double, kMaxAxes * kMaxAxes> A{};  // row-major
    std::array<double, kMaxAxes * kMaxAxes> L{};  // lower-triangular Cholesky factor
    bool deterministic = true;
};

enum class LawKind { heat, kolmogorov, transport };

std::string to_string(LawKind k);
LawKind law_kind_from_string(const std::string& s);

// The law of the backward variable for ∂_t F = νΔF − drift·v·∇_xF after time
// tau. Homogeneous grids carry no x axes, so kolmogorov reduces to heat and
// transport to the identity.
GaussianLaw make_law(LawKind kind, const PhaseGrid& grid, double nu, double tau, double drift = 1.0);

struct ConvolutionOptions {
    int n_gh = 6;  // Gauss–Hermite nodes per axis
    InterpolationKind interpolation = InterpolationKind::cubic_bspline;
};

// (f ∗ Γ)(z) = E f(Y(z)) at every node of the field's grid.
DensityField law_convolution(const DensityField& f, const GaussianLaw& law, const ConvolutionOptions& opts = {});
DensityField law_convolution(const Interpolant& f, const PhaseGrid& grid, const GaussianLaw& law,
                             const ConvolutionOptions& opts = {});

// ∂_{z_axis}(f ∗ Γ) with the derivative moved onto the data:
// E Σ_j A_{j,axis} ∂_j f(Y).
DensityField law_convolution_derivative(const Interpolant& f, const PhaseGrid& grid, const GaussianLaw& law,
                                        int axis, const ConvolutionOptions& opts = {});

enum class ConvolutionMode { spatial_only, time_space };

// Direct tensor-trapezoid quadrature against a pointwise kernel.
// spatial_only: ∫ f(y) Γ(t, z; s, y) dy with f = slices[0] at time s = slices[0].time.
// time_space:   ∫_{s_0}^{t} ∫ Q(σ, y) Γ(t, z; σ, y) dy dσ over the stored slices with
//               trapezoid panels, except the last panel, which ends at the
//               kernel singularity σ = t and uses its midpoint with the
//               source interpolated linearly in time.
DensityField generalized_convolution(const std::vector<DensityField>& slices, const KernelFn& kernel,
                                     ConvolutionMode mode, double t);

}  // namespace boltzlab
