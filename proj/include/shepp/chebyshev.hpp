#ifndef SHEPP_CHEBYSHEV_HPP
#define SHEPP_CHEBYSHEV_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "shepp/errors.hpp"
#include "shepp/gauss_legendre.hpp"
#include "shepp/rng.hpp"
#include "shepp/shepp_integrals.hpp"
#include "shepp/summation.hpp"

namespace shepp {

enum class Direction { increasing, decreasing };

/**
 * Positive monotone function on [0, eps], linear between breakpoints.
 *
 * Breakpoints are strictly ascending from 0 to eps; values are strictly
 * positive and ordered (nonstrictly) according to the direction.
 */
class MonotonePiecewiseLinear {
public:
    MonotonePiecewiseLinear(std::vector<double> breakpoints, std::vector<double> values,
                            Direction direction)
        : breakpoints_(std::move(breakpoints)), values_(std::move(values)), direction_(direction) {
        if (breakpoints_.size() < 2 || breakpoints_.size() != values_.size())
            throw ValidationError("piecewise linear: need >= 2 breakpoints, one value each");
        if (breakpoints_.front() != 0.0)
            throw ValidationError("piecewise linear: first breakpoint must be 0");
        for (std::size_t i = 1; i < breakpoints_.size(); ++i)
            if (!(breakpoints_[i] > breakpoints_[i - 1]))
                throw ValidationError("piecewise linear: breakpoints must be strictly ascending");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!(values_[i] > 0.0) || !std::isfinite(values_[i]))
                throw ValidationError("piecewise linear: values must be positive and finite");
            if (i == 0) continue;
            const bool ok = direction_ == Direction::increasing ? values_[i] >= values_[i - 1]
                                                                : values_[i] <= values_[i - 1];
            if (!ok) throw ValidationError("piecewise linear: values violate declared direction");
        }
    }

    static MonotonePiecewiseLinear constant(double value, double eps) {
        return {{0.0, eps}, {value, value}, Direction::decreasing};
    }

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<double>& values() const noexcept { return values_; }
    Direction direction() const noexcept { return direction_; }
    double domain_end() const noexcept { return breakpoints_.back(); }

    double operator()(double t) const noexcept {
        if (t <= 0.0) return values_.front();
        if (t >= domain_end()) return values_.back();
        const auto hi = static_cast<std::size_t>(
            std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) - breakpoints_.begin());
        const std::size_t lo = hi - 1;
        const double x0 = breakpoints_[lo];
        const double x1 = breakpoints_[hi];
        const double w = (t - x0) / (x1 - x0);
        return values_[lo] + w * (values_[hi] - values_[lo]);
    }

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    Direction direction_;
};

/// Trapezoid rule, exact for piecewise-linear functions.
inline double integral(const MonotonePiecewiseLinear& f) {
    const auto& x = f.breakpoints();
    const auto& v = f.values();
    CompensatedSum acc;
    for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (x[i] - x[i - 1]) * (v[i] + v[i - 1]);
    return acc.value();
}

namespace detail {

inline void check_shared_domain(std::span<const MonotonePiecewiseLinear> fs) {
    if (fs.empty()) throw ContractError("need at least one function");
    for (const auto& f : fs)
        if (f.domain_end() != fs.front().domain_end())
            throw ContractError("functions must share the domain [0, eps]");
}

inline void check_shared_direction(std::span<const MonotonePiecewiseLinear> fs) {
    for (const auto& f : fs)
        if (f.direction() != fs.front().direction())
            throw ContractError("functions must be all increasing or all decreasing");
}

// Product integral without the common-direction requirement.
inline double product_integral_any(std::span<const MonotonePiecewiseLinear> fs) {
    check_shared_domain(fs);
    if (fs.size() == 1) return integral(fs.front());

    std::vector<double> pts;
    for (const auto& f : fs) pts.insert(pts.end(), f.breakpoints().begin(), f.breakpoints().end());
    std::sort(pts.begin(), pts.end());
    std::vector<double> merged{pts.front()};
    for (double p : pts)
        if (p - merged.back() >= 1e-15) merged.push_back(p);
    merged.back() = fs.front().domain_end();

    const GaussLegendreRule rule = gauss_legendre(nodes_for_degree(fs.size()));
    CompensatedSum total;
    for (std::size_t s = 1; s < merged.size(); ++s) {
        const double half = 0.5 * (merged[s] - merged[s - 1]);
        const double mid = 0.5 * (merged[s] + merged[s - 1]);
        CompensatedSum seg;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double t = mid + half * rule.nodes[i];
            double prod = rule.weights[i];
            for (const auto& f : fs) prod *= f(t);
            seg += prod;
        }
        total += half * seg.value();
    }
    return total.value();
}

inline double correlation_impl(const MonotonePiecewiseLinear& f, const MonotonePiecewiseLinear& g) {
    const MonotonePiecewiseLinear pair[] = {f, g};
    const double eps = f.domain_end();
    return 2.0 * eps * product_integral_any(pair) - 2.0 * integral(f) * integral(g);
}

}  // namespace detail

/// Exact integral of prod_k f_k: Gauss-Legendre with ceil((n+1)/2) nodes on
/// each segment of the merged breakpoints, where the product is a
/// polynomial of degree <= n.
inline double product_integral_pl(std::span<const MonotonePiecewiseLinear> fs) {
    detail::check_shared_domain(fs);
    detail::check_shared_direction(fs);
    return detail::product_integral_any(fs);
}

struct InequalityCheck {
    double lhs = 0.0;  // eps^(n-1) int prod f_k
    double rhs = 0.0;  // prod int f_k
    bool holds = false;
    double margin = 0.0;
};

/// Tolerance is one-sided: lhs may fall short of rhs by at most
/// 1e-10 * max(1, rhs).
inline InequalityCheck check_inequality(std::span<const MonotonePiecewiseLinear> fs) {
    const double prod_int = product_integral_pl(fs);
    const double eps = fs.front().domain_end();
    InequalityCheck r;
    r.lhs = std::pow(eps, static_cast<double>(fs.size()) - 1.0) * prod_int;
    r.rhs = 1.0;
    for (const auto& f : fs) r.rhs *= integral(f);
    r.margin = r.lhs - r.rhs;
    r.holds = r.lhs >= r.rhs - 1e-10 * std::max(1.0, r.rhs);
    return r;
}

/// int int (f(x) - f(y)) (g(x) - g(y)) dx dy = 2 eps int fg - 2 int f int g,
/// nonnegative when f and g are monotone in the same direction.
inline double two_function_correlation(const MonotonePiecewiseLinear& f,
                                       const MonotonePiecewiseLinear& g) {
    const MonotonePiecewiseLinear pair[] = {f, g};
    detail::check_shared_domain(pair);
    detail::check_shared_direction(pair);
    return detail::correlation_impl(f, g);
}

/// Same double integral with no direction requirement. Only used to search
/// for counterexamples showing the common-monotonicity hypothesis matters.
inline double signed_correlation(const MonotonePiecewiseLinear& f,
                                 const MonotonePiecewiseLinear& g) {
    const MonotonePiecewiseLinear pair[] = {f, g};
    detail::check_shared_domain(pair);
    return detail::correlation_impl(f, g);
}

/// Random family for property tests. Function i draws from stream (seed, i):
/// `segments` linear pieces with uniform interior breakpoints in (0, eps)
/// and values uniform in [0, 2), floored at 1e-6 and sorted per direction.
inline std::vector<MonotonePiecewiseLinear> random_monotone_family(std::uint64_t seed,
                                                                   std::size_t n,
                                                                   Direction direction,
                                                                   std::size_t segments,
                                                                   double eps = 1.0) {
    if (n == 0 || segments == 0)
        throw ValidationError("random family: n and segments must be >= 1");
    std::vector<MonotonePiecewiseLinear> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        StreamRng rng(seed, i);
        std::vector<double> x{0.0, eps};
        while (x.size() < segments + 1) {
            const double p = rng.uniform(0.0, eps);
            if (p <= 0.0 || std::find(x.begin(), x.end(), p) != x.end()) continue;
            x.push_back(p);
        }
        std::sort(x.begin(), x.end());
        std::vector<double> v(segments + 1);
        for (double& val : v) val = std::max(1e-6, rng.uniform(0.0, 2.0));
        if (direction == Direction::increasing) std::sort(v.begin(), v.end());
        else std::sort(v.begin(), v.end(), std::greater<>());
        out.emplace_back(std::move(x), std::move(v), direction);
    }
    return out;
}

/// The Shepp factor f(t) = (1 - l - min(l,t))/(1 - l)^2 on [0, eps] as a
/// (lossless) decreasing piecewise-linear function.
inline MonotonePiecewiseLinear shepp_factor_function(double l, double eps) {
    std::vector<double> x{0.0};
    if (l < eps) x.push_back(l);
    x.push_back(eps);
    std::vector<double> v;
    v.reserve(x.size());
    for (double t : x) v.push_back(pair_factor_eval(l, t));
    return {std::move(x), std::move(v), Direction::decreasing};
}

}  // namespace shepp

#endif  // SHEPP_CHEBYSHEV_HPP
