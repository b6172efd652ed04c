#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace boltzlab {

enum class GridMode { inhomogeneous, homogeneous };

std::string to_string(GridMode m);
GridMode grid_mode_from_string(const std::string& s);

constexpr int kMaxAxes = 6;

// Uniform tensor-product grid on a symmetric box. Axes are ordered
// x_1..x_d, v_1..v_d in inhomogeneous mode and v_1..v_d in homogeneous mode,
// row-major with axis 0 slowest, so a velocity slice is contiguous.
class PhaseGrid {
public:
    PhaseGrid() = default;
    PhaseGrid(int d, GridMode mode, int n_x, double x_extent, int n_v, double v_extent);

    static PhaseGrid homogeneous(int d, int n_v, double v_extent);
    static PhaseGrid inhomogeneous(int d, int n_x, double x_extent, int n_v, double v_extent);

    int d() const { return d_; }
    GridMode mode() const { return mode_; }
    int n_x() const { return n_x_; }
    int n_v() const { return n_v_; }
    double x_extent() const { return x_extent_; }
    double v_extent() const { return v_extent_; }
    double h_x() const { return 2.0 * x_extent_ / (n_x_ - 1); }
    double h_v() const { return 2.0 * v_extent_ / (n_v_ - 1); }

    int dims() const { return mode_ == GridMode::homogeneous ? d_ : 2 * d_; }
    bool is_velocity_axis(int axis) const { return mode_ == GridMode::homogeneous || axis >= d_; }
    int n(int axis) const { return is_velocity_axis(axis) ? n_v_ : n_x_; }
    double h(int axis) const { return is_velocity_axis(axis) ? h_v() : h_x(); }
    double extent(int axis) const { return is_velocity_axis(axis) ? v_extent_ : x_extent_; }
    double coord(int axis, int i) const { return -extent(axis) + i * h(axis); }

    std::size_t size() const { return size_; }
    std::size_t stride(int axis) const { return stride_[axis]; }
    // Number of nodes in one velocity slice and number of spatial nodes.
    std::size_t velocity_size() const;
    std::size_t space_size() const { return size_ / velocity_size(); }

    void unflatten(std::size_t flat, int* idx) const;
    std::size_t flatten(const int* idx) const;
    void node_coords(std::size_t flat, double* z) const;
    double radius(std::size_t flat) const;

    // Trapezoid weight of a node for the integral over all axes.
    double trapezoid_weight(std::size_t flat) const;

    // The velocity-only grid carried by one spatial node.
    PhaseGrid velocity_grid() const { return homogeneous(d_, n_v_, v_extent_); }

    bool operator==(const PhaseGrid& o) const;

private:
    int d_ = 1;
    GridMode mode_ = GridMode::homogeneous;
    int n_x_ = 1, n_v_ = 3;
    double x_extent_ = 0.0, v_extent_ = 1.0;
    std::size_t size_ = 0;
    std::array<std::size_t, kMaxAxes> stride_{};
};

struct DensityField {
    PhaseGrid grid;
    std::vector<double> values;
    double time = 0.0;

    DensityField() = default;
    DensityField(const PhaseGrid& g, double t = 0.0) : grid(g), values(g.size(), 0.0), time(t) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
};

struct DecayReport {
    double s = 0.0;
    double c_fit = 0.0;
    int m = 0;
};

using PointFunction = std::function<double(const double* z)>;

DensityField sample_field(const PointFunction& generator, const PhaseGrid& grid, double time = 0.0);

// Second-order central difference along one axis, second-order one-sided at
// the box boundary.
std::vector<double> gradient_component(const DensityField& f, int axis);
std::vector<double> laplacian(const DensityField& f);

double weighted_sup_norm(const DensityField& f, double s, bool with_gradient);
DecayReport decay_class_fit(const DensityField& f, double s, int m);

std::vector<double> compactify_coords(const std::vector<double>& z);
std::vector<double> decompactify_coords(const std::vector<double>& y);

DensityField singular_datum(double alpha0, const PhaseGrid& grid);
double singular_profile(double r, double alpha0);

// a/(2πc)^{d/2} exp(-|v-b|²/(2c)) in the velocity variables.
DensityField maxwellian_field(double a, const std::vector<double>& b, double c, const PhaseGrid& grid);
double maxwellian_value(double a, const double* b, double c, const double* v, int d);

// Trapezoid integral over all axes.
double integrate(const DensityField& f);
// Velocity moments of one contiguous velocity slice.
double slice_integral(const double* slice, const PhaseGrid& vgrid);

double min_value(const DensityField& f);
double max_abs(const DensityField& f);
double max_abs(const std::vector<double>& v);

}  // namespace boltzlab
