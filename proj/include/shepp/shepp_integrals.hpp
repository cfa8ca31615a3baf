#ifndef SHEPP_SHEPP_INTEGRALS_HPP
#define SHEPP_SHEPP_INTEGRALS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shepp/errors.hpp"
#include "shepp/gauss_legendre.hpp"
#include "shepp/parallel.hpp"
#include "shepp/sequences.hpp"
#include "shepp/summation.hpp"

namespace shepp {

// ---------------------------------------------------------------------------
// Single factor f(t) = (1 - l - min(l, t)) / (1 - l)^2
// ---------------------------------------------------------------------------

inline double pair_factor_eval(double l, double t) {
    if (!(l > 0.0 && l < 1.0)) throw DomainError("pair factor: l must lie in (0,1)");
    if (!(t >= 0.0)) throw DomainError("pair factor: t must be >= 0");
    const double numer = 1.0 - l - std::min(l, t);
    if (!(numer > 0.0))
        throw DomainError("pair factor: t = " + std::to_string(t) + " too large for l = " +
                          std::to_string(l) + " (numerator 1 - l - min(l,t) <= 0)");
    const double d = 1.0 - l;
    return numer / (d * d);
}

/// Exact integral of pair_factor_eval(l, .) over [0, eps].
///   l <  eps:  (l^2/2 + eps - 2 eps l) / (1 - l)^2
///   l >= eps:  (eps (1 - l) - eps^2/2) / (1 - l)^2
/// The integrand must stay positive on the closed interval.
inline double pair_factor_integral(double l, double eps) {
    if (!(l > 0.0 && l < 1.0)) throw DomainError("pair factor integral: l must lie in (0,1)");
    if (!(eps > 0.0)) throw DomainError("pair factor integral: eps must be > 0");
    const double d = 1.0 - l;
    if (l < eps) {
        if (!(1.0 - 2.0 * l > 0.0))
            throw DomainError("pair factor integral: integrand 1 - 2l <= 0 on [l, eps]");
        return (0.5 * l * l + eps - 2.0 * eps * l) / (d * d);
    }
    if (!(1.0 - l - eps > 0.0))
        throw DomainError("pair factor integral: eps = " + std::to_string(eps) +
                          " makes 1 - l - eps <= 0 for l = " + std::to_string(l));
    return (eps * d - 0.5 * eps * eps) / (d * d);
}

// ---------------------------------------------------------------------------
// Product integral  int_0^eps prod_k f_k(t) dt
// ---------------------------------------------------------------------------

struct QuadratureResult {
    double value = 0.0;
    double log_value = 0.0;
    std::size_t segment_count = 0;
    std::size_t nodes_per_segment = 0;
    std::vector<double> breakpoints;  // 0 = b_0 < b_1 < ... < b_S = eps
};

struct QuadratureOptions {
    unsigned threads = 1;          // 0 = all cores
    std::size_t node_multiplier = 1;  // >1 oversamples, for exactness checks
};

/// Validates (lengths, eps) for every routine that integrates over [0, eps].
inline void check_product_domain(std::span<const double> lengths, double eps) {
    validate_lengths(lengths);
    if (lengths.empty()) {
        if (!(eps > 0.0 && eps < 1.0))
            throw DomainError("eps = " + std::to_string(eps) + " violates 0 < eps < 1");
        return;
    }
    epsilon_window(lengths.front(), eps);
}

/// {0, eps} together with every l_k < eps, sorted; points closer than 1e-15
/// are merged.
inline std::vector<double> segment_breakpoints(std::span<const double> lengths, double eps) {
    std::vector<double> pts;
    pts.reserve(lengths.size() + 2);
    pts.push_back(0.0);
    for (auto it = lengths.rbegin(); it != lengths.rend(); ++it)
        if (*it < eps && *it - pts.back() >= 1e-15) pts.push_back(*it);
    if (eps - pts.back() < 1e-15 && pts.size() > 1) pts.back() = eps;
    else pts.push_back(eps);
    return pts;
}

/**
 * Exact (to roundoff) value of int_0^eps prod_k f_k(t) dt.
 *
 * Between consecutive breakpoints each factor is either the constant
 * (1 - 2l)/(1 - l)^2 (l below the segment) or linear in t (l above it), so
 * the integrand is a polynomial of degree <= n and ceil((n+1)/2)
 * Gauss-Legendre nodes per segment integrate it exactly.
 *
 * The integrand is evaluated as exp(log F(t)) with
 *   log F(t) = -2 sum log(1 - l_k) + sum_{l_k <= t} log(1 - 2 l_k)
 *              + sum_{l_k > t} log(1 - l_k - t),
 * the last sum taken as logs of short running products. Segment integrals
 * are combined by log-sum-exp in breakpoint order, independent of threads.
 */
inline QuadratureResult product_integral(std::span<const double> lengths, double eps,
                                         const QuadratureOptions& opts = {}) {
    check_product_domain(lengths, eps);
    QuadratureResult res;
    const std::size_t n = lengths.size();
    if (n == 0) {
        res.value = eps;
        res.log_value = std::log(eps);
        res.segment_count = 1;
        res.nodes_per_segment = 1;
        res.breakpoints = {0.0, eps};
        return res;
    }

    std::vector<double> asc(lengths.rbegin(), lengths.rend());
    CompensatedSum denom;
    for (double l : asc) denom += -2.0 * std::log1p(-l);
    std::vector<double> const_prefix(n + 1, 0.0);  // sum_{i<j} log(1 - 2 asc_i)
    {
        CompensatedSum acc;
        for (std::size_t i = 0; i < n; ++i) {
            if (asc[i] < eps) acc += std::log1p(-2.0 * asc[i]);
            const_prefix[i + 1] = acc.value();
        }
    }
    const double log_denom = denom.value();
    const bool tiny_factors = (1.0 - lengths.front() - eps) < 1e-100;

    res.breakpoints = segment_breakpoints(lengths, eps);
    res.segment_count = res.breakpoints.size() - 1;
    res.nodes_per_segment = nodes_for_degree(n) * std::max<std::size_t>(opts.node_multiplier, 1);
    const GaussLegendreRule rule = gauss_legendre(res.nodes_per_segment);
    std::vector<double> log_weights(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) log_weights[i] = std::log(rule.weights[i]);

    std::vector<double> segment_logs(res.segment_count);
    parallel_for(res.segment_count, opts.threads, [&](std::size_t s) {
        const double a = res.breakpoints[s];
        const double b = res.breakpoints[s + 1];
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        // [0, lo): constant on the segment; [lo, hi): kink inside (merged
        // breakpoints only); [hi, n): linear on the segment.
        const auto lo = static_cast<std::size_t>(
            std::upper_bound(asc.begin(), asc.end(), a) - asc.begin());
        const auto hi = std::max(lo, static_cast<std::size_t>(
            std::lower_bound(asc.begin(), asc.end(), b) - asc.begin()));
        const double base = log_denom + const_prefix[lo];
        LogSumExp seg;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double t = mid + half * rule.nodes[i];
            double log_f = base;
            for (std::size_t k = lo; k < hi; ++k)
                log_f += std::log(1.0 - asc[k] - std::min(asc[k], t));
            if (tiny_factors) {
                for (std::size_t k = hi; k < n; ++k) log_f += std::log(1.0 - asc[k] - t);
            } else {
                double prod = 1.0;
                for (std::size_t k = hi; k < n; ++k) {
                    prod *= 1.0 - asc[k] - t;
                    if (prod < 1e-150) {
                        log_f += std::log(prod);
                        prod = 1.0;
                    }
                }
                log_f += std::log(prod);
            }
            seg.add(log_weights[i] + log_f);
        }
        segment_logs[s] = seg.log_value() + std::log(half);
    });

    res.log_value = log_sum_exp(segment_logs);
    res.value = std::exp(res.log_value);
    return res;
}

// ---------------------------------------------------------------------------
// Growth function g_eps(x) = (1/eps) (x^2/2 + eps - 2 eps x) / (1 - x)^2
// ---------------------------------------------------------------------------

namespace detail {

// Unchecked; defined for x > -1 as well, which the finite-difference probe
// needs.
inline double growth_formula(double eps, double x) noexcept {
    const double d = 1.0 - x;
    return (0.5 * x * x + eps - 2.0 * eps * x) / (eps * d * d);
}

inline void check_growth_args(double eps, double x) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("growth: eps must lie in (0,1)");
    if (!(x >= 0.0)) throw DomainError("growth: x must be >= 0");
    if (!(x < 1.0)) throw DomainError("growth: x = " + std::to_string(x) + " must be < 1");
}

}  // namespace detail

inline double growth_eval(double eps, double x) {
    detail::check_growth_args(eps, x);
    return detail::growth_formula(eps, x);
}

/// log g_eps(x) through log1p of the exact excess
/// g - 1 = x^2 (1 - 2 eps) / (2 eps (1 - x)^2), which keeps full relative
/// precision for small x where g - 1 ~ x^2.
inline double growth_log(double eps, double x) {
    detail::check_growth_args(eps, x);
    const double d = 1.0 - x;
    return std::log1p(x * x * (1.0 - 2.0 * eps) / (2.0 * eps * d * d));
}

struct GrowthProbe {
    double g0 = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// g(0), and central differences for g'(0) (h = 1e-4) and g''(0) (h = 1e-3).
/// Expected: (1, 0, (1 - 2 eps)/eps).
inline GrowthProbe growth_derivative_probe(double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw DomainError("growth probe: eps must lie in (0, 1/2)");
    constexpr double h1 = 1e-4;
    constexpr double h2 = 1e-3;
    GrowthProbe p;
    p.g0 = growth_eval(eps, 0.0);
    p.d1 = (detail::growth_formula(eps, h1) - detail::growth_formula(eps, -h1)) / (2.0 * h1);
    p.d2 = (detail::growth_formula(eps, h2) - 2.0 * p.g0 + detail::growth_formula(eps, -h2)) /
           (h2 * h2);
    return p;
}

// ---------------------------------------------------------------------------
// Lower-bound chain
// ---------------------------------------------------------------------------

/// log of eps^-(n-1) prod_k int_0^eps f_k. Empty input gives log eps.
inline double chebyshev_lower_bound_log(std::span<const double> lengths, double eps) {
    check_product_domain(lengths, eps);
    if (lengths.empty()) return std::log(eps);
    CompensatedSum acc(-(static_cast<double>(lengths.size()) - 1.0) * std::log(eps));
    for (double l : lengths) acc += std::log(pair_factor_integral(l, eps));
    return acc.value();
}

inline double chebyshev_lower_bound(std::span<const double> lengths, double eps) {
    return std::exp(chebyshev_lower_bound_log(lengths, eps));
}

struct LowerBoundCertificate {
    std::size_t m = 0;
    double log_C = 0.0;
    double g_log_sum = 0.0;
    double bound_log = 0.0;
};

inline void check_bound_path(double eps) {
    if (!(eps < 0.5))
        throw BoundPathError("eps = " + std::to_string(eps) +
                             " violates eps < 1/2 required by the lower-bound chain");
}

/**
 * Splits the Chebyshev bound at m = #{k : l_k >= eps}:
 *   C = eps^(1-m) prod_{k<=m} int_0^eps f_k,
 *   bound = C * prod_{k>m} g_eps(l_k),
 * using int_0^eps f_k = eps g_eps(l_k) whenever l_k < eps.
 */
inline LowerBoundCertificate shepp_lower_bound(std::span<const double> lengths, double eps) {
    check_bound_path(eps);
    check_product_domain(lengths, eps);
    LowerBoundCertificate cert;
    cert.m = threshold_index(lengths, eps);
    CompensatedSum head((1.0 - static_cast<double>(cert.m)) * std::log(eps));
    for (std::size_t k = 0; k < cert.m; ++k) head += std::log(pair_factor_integral(lengths[k], eps));
    CompensatedSum tail;
    for (std::size_t k = cert.m; k < lengths.size(); ++k) tail += growth_log(eps, lengths[k]);
    cert.log_C = head.value();
    cert.g_log_sum = tail.value();
    cert.bound_log = cert.log_C + cert.g_log_sum;
    return cert;
}

struct DivergenceRow {
    std::size_t n = 0;
    std::optional<double> log_product_integral;  // absent above the quadrature cap
    std::optional<double> bound_log;             // absent when eps >= 1/2
    std::optional<double> g_log_sum;
};

struct DivergenceOptions {
    std::size_t quadrature_cap = 2000;
    unsigned threads = 1;
};

/// One row per checkpoint n (strictly ascending, n = 0 allowed). The bound
/// columns come from a single incremental pass over l_1..l_N; exact
/// quadrature is rerun per checkpoint up to the cap.
inline std::vector<DivergenceRow> divergence_table(const LengthSequence& seq, double eps,
                                                   std::span<const std::size_t> checkpoints,
                                                   const DivergenceOptions& opts = {}) {
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw ValidationError("checkpoints must be strictly ascending");
    const std::size_t max_n = checkpoints.empty() ? 0 : checkpoints.back();
    const std::vector<double> lengths = generate(seq, std::max<std::size_t>(max_n, 1));
    epsilon_window(lengths.front(), eps);
    const bool with_bound = eps < 0.5;

    std::vector<DivergenceRow> rows;
    rows.reserve(checkpoints.size());
    CompensatedSum head_integrals;  // sum_{k<=m} log int f_k
    CompensatedSum g_sum;
    std::size_t m = 0;
    std::size_t k = 0;
    for (std::size_t n : checkpoints) {
        for (; k < n; ++k) {
            if (!with_bound) continue;
            if (lengths[k] >= eps) {
                head_integrals += std::log(pair_factor_integral(lengths[k], eps));
                ++m;
            } else {
                g_sum += growth_log(eps, lengths[k]);
            }
        }
        DivergenceRow row;
        row.n = n;
        const std::span<const double> prefix(lengths.data(), n);
        if (n <= opts.quadrature_cap)
            row.log_product_integral =
                product_integral(prefix, eps, {opts.threads, 1}).log_value;
        if (with_bound) {
            const double log_C = (1.0 - static_cast<double>(m)) * std::log(eps) + head_integrals.value();
            row.g_log_sum = g_sum.value();
            row.bound_log = log_C + *row.g_log_sum;
        }
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Covering criterion  sum_n n^-2 exp(l_1 + ... + l_n)
// ---------------------------------------------------------------------------

struct CriterionSeries {
    std::vector<double> partial_log_terms;  // log term_n = sum_{k<=n} l_k - 2 ln n
    std::vector<double> partial_log_sums;   // log S_n
    std::vector<std::optional<double>> partial_sums;  // S_n, absent on overflow
};

inline CriterionSeries criterion_partial_sums(const LengthSequence& seq, std::size_t N) {
    const std::vector<double> lengths = generate(seq, N);
    CriterionSeries out;
    out.partial_log_terms.reserve(N);
    out.partial_log_sums.reserve(N);
    out.partial_sums.reserve(N);
    CompensatedSum running;
    LogSumExp total;
    for (std::size_t n = 1; n <= N; ++n) {
        running += lengths[n - 1];
        const double log_term = running.value() - 2.0 * std::log(static_cast<double>(n));
        total.add(log_term);
        const double log_s = total.log_value();
        out.partial_log_terms.push_back(log_term);
        out.partial_log_sums.push_back(log_s);
        const double s = std::exp(log_s);
        out.partial_sums.push_back(std::isfinite(s) ? std::optional<double>(s) : std::nullopt);
    }
    return out;
}

}  // namespace shepp

#endif  // SHEPP_SHEPP_INTEGRALS_HPP
