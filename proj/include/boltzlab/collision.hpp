#pragma once

#include <array>
#include <utility>
#include <vector>

#include "boltzlab/grid.hpp"
#include "boltzlab/interpolation.hpp"
#include "boltzlab/sphere.hpp"

namespace boltzlab {

struct CollisionConfig {
    SphereQuadrature sphere;
    // Radius of the v* box; <= 0 means the full velocity box.
    double vstar_extent = 0.0;
    InterpolationKind interpolation = InterpolationKind::cubic_bspline;
};

CollisionConfig default_collision_config(int d);

using Vec3 = std::array<double, 3>;

std::pair<Vec3, Vec3> post_collision_velocities(const Vec3& v, const Vec3& v_star, const Vec3& sigma);

// Q(F,F) on one velocity slice (n_v^d contiguous values of a homogeneous grid).
std::vector<double> collision_operator(const double* F, const PhaseGrid& vgrid, const CollisionConfig& cfg);
std::vector<double> collision_operator(const DensityField& F, const CollisionConfig& cfg);

// Two-argument form: gain F(ṽ)G(ṽ*), loss F(v)G(v*).
std::vector<double> collision_bilinear(const double* F, const double* G, const PhaseGrid& vgrid,
                                       const CollisionConfig& cfg);

// Loss part F(v)·Σ|v−v*|G(v*)·|S^{d-1}| alone; the magnitude against which Q
// is judged.
std::vector<double> collision_loss(const double* F, const PhaseGrid& vgrid, const CollisionConfig& cfg);

// Applies Q slice by slice over every spatial node of F.
DensityField collision_field(const DensityField& F, const CollisionConfig& cfg);

struct CollisionMoments {
    double mass = 0.0;
    std::array<double, 3> momentum{};
    double energy = 0.0;
};

CollisionMoments collision_moments(const std::vector<double>& Q, const PhaseGrid& vgrid);
// Moments of |Q| with the same weights (|1|, |v_j|, |v|²), used as the scale.
CollisionMoments absolute_moments(const std::vector<double>& Q, const PhaseGrid& vgrid);

double entropy_production(const double* F, const PhaseGrid& vgrid, const CollisionConfig& cfg);

// Taylor-remainder rewriting of Q: gain minus loss expressed as the
// θ-integral of the derivative of F(v+θh)F(v*−θh) along the segment that
// carries (v, v*) to (ṽ, ṽ*). W_j is the contribution of the j-th of the 2d
// variables of G(v, w) = F(v)F(v−w).
std::vector<std::vector<double>> w_decomposition(const double* F, const PhaseGrid& vgrid,
                                                 const CollisionConfig& cfg, int n_theta = 8);
std::vector<double> taylor_form_collision(const double* F, const PhaseGrid& vgrid, const CollisionConfig& cfg,
                                          int n_theta = 8);

}  // namespace boltzlab
