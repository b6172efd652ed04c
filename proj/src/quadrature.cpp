#include "boltzlab/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace boltzlab {

namespace {

// Golub–Welsch: eigen-decomposition of the symmetric Jacobi matrix.
QuadratureRule golub_welsch(const Eigen::VectorXd& offdiag, double mu0) {
    const int n = static_cast<int>(offdiag.size()) + 1;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = offdiag(i);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        r.weights[i] = mu0 * v0 * v0;
    }
    // Symmetrise: both families are symmetric about 0.
    for (int i = 0; i < n / 2; ++i) {
        const int j = n - 1 - i;
        const double x = 0.5 * (r.nodes[j] - r.nodes[i]);
        const double w = 0.5 * (r.weights[i] + r.weights[j]);
        r.nodes[i] = -x;
        r.nodes[j] = x;
        r.weights[i] = r.weights[j] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

std::mutex cache_mutex;
std::map<int, QuadratureRule> legendre_cache, hermite_cache;

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    QuadratureRule ref;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = legendre_cache.find(n);
        if (it == legendre_cache.end()) {
            Eigen::VectorXd off(n - 1);
            for (int k = 1; k < n; ++k) off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
            it = legendre_cache.emplace(n, golub_welsch(off, 2.0)).first;
        }
        ref = it->second;
    }
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        ref.nodes[i] = c + hw * ref.nodes[i];
        ref.weights[i] *= hw;
    }
    return ref;
}

QuadratureRule gauss_hermite_normal(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite_normal: n must be >= 1");
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = hermite_cache.find(n);
    if (it == hermite_cache.end()) {
        // Probabilists' Hermite recurrence: off-diagonal sqrt(k).
        Eigen::VectorXd off(n - 1);
        for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(static_cast<double>(k));
        it = hermite_cache.emplace(n, golub_welsch(off, 1.0)).first;
    }
    return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int panels, int order) {
    const QuadratureRule ref = gauss_legendre(order);
    const double width = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        double s = 0.0;
        for (int i = 0; i < order; ++i) s += ref.weights[i] * f(lo + 0.5 * width * (ref.nodes[i] + 1.0));
        sum += 0.5 * width * s;
    }
    return sum;
}

}  // namespace boltzlab
