#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "boltzlab/grid.hpp"

namespace boltzlab {

enum class InterpolationKind { multilinear, cubic_bspline };

std::string to_string(InterpolationKind k);
InterpolationKind interpolation_from_string(const std::string& s);

// Off-grid evaluation of a field sampled on a uniform tensor grid, with the
// field extended by zero outside the box. The cubic B-spline variant is
// prefiltered so that it interpolates the samples; its coefficient array is
// padded by `pad` zero nodes per side before filtering.
class Interpolant {
public:
    Interpolant() = default;
    Interpolant(const double* values, int dims, const int* n, const double* lo, const double* h,
                InterpolationKind kind, int pad = 4);
    Interpolant(const DensityField& f, InterpolationKind kind, int pad = 4);

    InterpolationKind kind() const { return kind_; }
    int dims() const { return dims_; }
    int pad() const { return pad_; }
    int padded_n(int a) const { return m_[a]; }
    std::size_t padded_stride(int a) const { return stride_[a]; }
    double lo(int a) const { return lo_[a]; }
    double h(int a) const { return h_[a]; }

    // Raw zero-padded samples and (for splines) filtered coefficients, both
    // on the padded grid; node i of axis a sits at padded index i + pad.
    const std::vector<double>& samples() const { return samples_; }
    const std::vector<double>& coefficients() const { return kind_ == InterpolationKind::cubic_bspline ? coef_ : samples_; }

    double value(const double* point) const;
    double value_and_gradient(const double* point, double* grad) const;

private:
    InterpolationKind kind_ = InterpolationKind::multilinear;
    int dims_ = 0;
    int pad_ = 0;
    std::array<int, kMaxAxes> n_{}, m_{};
    std::array<double, kMaxAxes> lo_{}, h_{};
    std::array<std::size_t, kMaxAxes> stride_{};
    std::vector<double> samples_, coef_;
};

// Cubic B-spline basis weights for fractional offset t in [0,1), taps at
// floor-1 .. floor+2; derivative weights in units of the grid spacing.
void bspline_weights(double t, double* w);
void bspline_derivative_weights(double t, double* w);

// In-place interpolation prefilter along one strided line.
void bspline_prefilter_line(double* data, std::size_t n, std::size_t stride);

}  // namespace boltzlab
