#pragma once

#include <functional>
#include <vector>

namespace boltzlab {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss–Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Gauss–Hermite rule for the standard normal law: sum w_i f(x_i) ≈ E f(Z).
QuadratureRule gauss_hermite_normal(int n);

// Composite Gauss–Legendre over [a, b] split into `panels` equal pieces.
double integrate_gl(const std::function<double(double)>& f, double a, double b, int panels, int order = 8);

}  // namespace boltzlab
