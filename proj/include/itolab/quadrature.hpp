#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace itolab {

/// Nodes and weights for n-point Gauss-Legendre quadrature on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Computed by Newton iteration on the Legendre polynomials; cached per n.
const GaussLegendreRule& gauss_legendre(std::size_t n);

/// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
template <typename F>
double gl_integrate(F&& f, double a, double b, std::size_t n = 64) {
    if (!(b > a)) return 0.0;
    const GaussLegendreRule& rule = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return half * acc;
}

}  // namespace itolab
