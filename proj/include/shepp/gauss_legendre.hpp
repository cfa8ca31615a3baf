#ifndef SHEPP_GAUSS_LEGENDRE_HPP
#define SHEPP_GAUSS_LEGENDRE_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace shepp {

/// Gauss-Legendre rule on [-1, 1]. An n-point rule integrates polynomials
/// of degree <= 2n - 1 exactly.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

/// Smallest rule that is exact for polynomials of the given degree.
constexpr std::size_t nodes_for_degree(std::size_t degree) noexcept {
    return (degree + 2) / 2;  // ceil((degree + 1) / 2)
}

// Evaluates P_n(x) and P_n'(x) by the three-term recurrence.
inline void legendre_with_derivative(std::size_t n, double x, double& p, double& dp) {
    double p0 = 1.0;
    double p1 = x;
    if (n == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
}

/// Newton iteration on P_n from Tricomi's initial guesses. Nodes are
/// returned in ascending order; the rule is symmetric by construction.
inline GaussLegendreRule gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussLegendreRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const double nd = static_cast<double>(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        const double theta = std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5);
        double x = std::cos(theta) *
                   (1.0 - (nd - 1.0) / (8.0 * nd * nd * nd));
        double p = 0.0;
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            legendre_with_derivative(n, x, p, dp);
            const double step = p / dp;
            x -= step;
            if (std::abs(step) <= 1e-16 * std::abs(x) + 1e-300) break;
        }
        legendre_with_derivative(n, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // i-th largest node goes to the back.
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace shepp

#endif  // SHEPP_GAUSS_LEGENDRE_HPP
