#include "boltzlab/sphere.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace boltzlab {

double sphere_measure(int d) {
    switch (d) {
        case 1: return 2.0;
        case 2: return 2.0 * std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi;
    }
    throw std::invalid_argument("sphere_measure: d must be 1, 2 or 3");
}

std::vector<int> SphereQuadrature::antipodes() const {
    std::vector<int> out(nodes.size(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            double e = 0.0;
            for (int c = 0; c < 3; ++c) e = std::max(e, std::fabs(nodes[i][c] + nodes[j][c]));
            if (e < 1e-12 && std::fabs(weights[i] - weights[j]) < 1e-14) {
                out[i] = static_cast<int>(j);
                break;
            }
        }
    }
    return out;
}

namespace {

using Node = std::array<double, 3>;

// All sign and permutation variants of (a, b, c), without duplicates.
void add_orbit(SphereQuadrature& q, double a, double b, double c, double w) {
    const Node base{a, b, c};
    const int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perm) {
        for (int s = 0; s < 8; ++s) {
            Node n{base[p[0]], base[p[1]], base[p[2]]};
            for (int k = 0; k < 3; ++k)
                if (s & (1 << k)) n[k] = -n[k];
            bool dup = false;
            for (const auto& m : q.nodes)
                if (std::fabs(m[0] - n[0]) + std::fabs(m[1] - n[1]) + std::fabs(m[2] - n[2]) < 1e-14) dup = true;
            if (!dup) {
                q.nodes.push_back(n);
                q.weights.push_back(w);
            }
        }
    }
}

}  // namespace

SphereQuadrature sphere_quadrature(int d, int n) {
    SphereQuadrature q;
    q.d = d;
    if (d == 1) {
        q.nodes = {{-1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
        q.weights = {1.0, 1.0};
        return q;
    }
    if (d == 2) {
        if (n < 2 || n % 2 != 0) throw std::invalid_argument("circle rule needs an even node count >= 2");
        for (int i = 0; i < n; ++i) {
            const double phi = 2.0 * std::numbers::pi * (i + 0.5) / n;
            q.nodes.push_back({std::cos(phi), std::sin(phi), 0.0});
            q.weights.push_back(2.0 * std::numbers::pi / n);
        }
        return q;
    }
    if (d != 3) throw std::invalid_argument("sphere_quadrature: d must be 1, 2 or 3");
    const double r2 = 1.0 / std::sqrt(2.0), r3 = 1.0 / std::sqrt(3.0);
    switch (n) {
        case 6: add_orbit(q, 1, 0, 0, 1.0 / 6.0); break;
        case 14:
            add_orbit(q, 1, 0, 0, 1.0 / 15.0);
            add_orbit(q, r3, r3, r3, 3.0 / 40.0);
            break;
        case 26:
            add_orbit(q, 1, 0, 0, 1.0 / 21.0);
            add_orbit(q, 0, r2, r2, 4.0 / 105.0);
            add_orbit(q, r3, r3, r3, 9.0 / 280.0);
            break;
        case 50: {
            const double l = 1.0 / std::sqrt(11.0), m = 3.0 / std::sqrt(11.0);
            add_orbit(q, 1, 0, 0, 4.0 / 315.0);
            add_orbit(q, 0, r2, r2, 64.0 / 2835.0);
            add_orbit(q, r3, r3, r3, 27.0 / 1280.0);
            add_orbit(q, l, l, m, 14641.0 / 725760.0);
            break;
        }
        default:
            throw std::invalid_argument("no Lebedev rule with " + std::to_string(n) +
                                        " nodes (available: 6, 14, 26, 50)");
    }
    if (static_cast<int>(q.size()) != n) throw std::logic_error("Lebedev orbit construction produced wrong size");
    double sum = 0.0;
    for (double w : q.weights) sum += w;
    for (double& w : q.weights) w *= 4.0 * std::numbers::pi / sum;
    return q;
}

}  // namespace boltzlab
