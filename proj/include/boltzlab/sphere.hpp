#pragma once

#include <array>
#include <vector>

namespace boltzlab {

struct SphereQuadrature {
    int d = 3;
    std::vector<std::array<double, 3>> nodes;  // components beyond d are zero
    std::vector<double> weights;               // sum to the surface measure of S^{d-1}

    std::size_t size() const { return nodes.size(); }
    // Index of the antipode of each node, or -1 when the set is not symmetric.
    std::vector<int> antipodes() const;
};

// d = 1: {-1, +1}; d = 2: n equally spaced points (n even); d = 3: Lebedev
// rules with n in {6, 14, 26, 50}.
SphereQuadrature sphere_quadrature(int d, int n);
double sphere_measure(int d);

}  // namespace boltzlab
