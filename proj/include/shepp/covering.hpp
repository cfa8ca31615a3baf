#ifndef SHEPP_COVERING_HPP
#define SHEPP_COVERING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shepp/errors.hpp"
#include "shepp/parallel.hpp"
#include "shepp/rng.hpp"
#include "shepp/sequences.hpp"
#include "shepp/summation.hpp"

namespace shepp {

/// Arc [start, start + length) on the circle R/Z, half-open.
struct Arc {
    double start = 0.0;
    double length = 0.0;

    bool covers(double x) const noexcept {
        double d = std::fmod(x - start, 1.0);
        if (d < 0.0) d += 1.0;
        return d < length;
    }
};

/// Half-open circular interval; end < start means it wraps through 0.
/// {0, 1} is the whole circle.
struct CircularInterval {
    double start = 0.0;
    double end = 0.0;

    double length() const noexcept { return end > start ? end - start : end + 1.0 - start; }
    friend bool operator==(const CircularInterval&, const CircularInterval&) = default;
};

/**
 * Uncovered part of the circle.
 *
 * Stored as disjoint half-open pieces of [0, 1) keyed by start; a gap
 * through 0 is kept as [a, 1) plus [0, b) internally and reported as a
 * single wrapping interval by gaps().
 */
class GapSet {
public:
    GapSet() { pieces_.emplace(0.0, 1.0); }

    static GapSet empty_set() {
        GapSet g;
        g.pieces_.clear();
        g.total_ = 0.0;
        return g;
    }

    bool covered() const noexcept { return pieces_.empty(); }
    double total_gap() const noexcept { return total_; }
    std::size_t piece_count() const noexcept { return pieces_.size(); }

    /// Removes the arc; total_gap drops by the measure of the overlap.
    void apply(const Arc& arc) {
        if (!(arc.length > 0.0)) return;
        if (arc.length >= 1.0) {
            pieces_.clear();
            total_ = 0.0;
            return;
        }
        double a = std::fmod(arc.start, 1.0);
        if (a < 0.0) a += 1.0;
        const double b = a + arc.length;
        if (b <= 1.0) {
            subtract(a, b);
        } else {
            subtract(a, 1.0);
            subtract(0.0, b - 1.0);
        }
        if (pieces_.empty()) total_ = 0.0;
    }

    std::vector<CircularInterval> gaps() const {
        std::vector<CircularInterval> out;
        out.reserve(pieces_.size());
        for (const auto& [s, e] : pieces_) out.push_back({s, e});
        if (out.size() >= 2 && out.front().start == 0.0 && out.back().end == 1.0) {
            out.back().end = out.front().end;
            out.erase(out.begin());
        }
        return out;
    }

    /// Structural check: pieces sorted, disjoint, non-empty, inside [0,1],
    /// and total_gap matching their summed length within `tol`.
    bool well_formed(double tol = 1e-12) const {
        double prev_end = 0.0;
        CompensatedSum sum;
        for (const auto& [s, e] : pieces_) {
            if (!(s >= prev_end && e > s && e <= 1.0)) return false;
            prev_end = e;
            sum += e - s;
        }
        return std::abs(sum.value() - total_) <= tol && total_ >= 0.0 && total_ <= 1.0;
    }

private:
    void subtract(double a, double b) {
        auto it = pieces_.upper_bound(a);
        if (it != pieces_.begin() && std::prev(it)->second > a) --it;
        while (it != pieces_.end() && it->first < b) {
            const double s = it->first;
            const double e = it->second;
            total_ -= std::min(e, b) - std::max(s, a);
            it = pieces_.erase(it);
            if (s < a) pieces_.emplace_hint(it, s, a);
            if (e > b) {
                pieces_.emplace_hint(it, b, e);
                break;
            }
        }
    }

    std::map<double, double> pieces_;  // start -> end
    double total_ = 1.0;
};

inline GapSet apply_arc(GapSet state, const Arc& arc) {
    state.apply(arc);
    return state;
}

/// Smallest n such that arcs 1..n cover the circle, or nullopt. Starts are
/// drawn from `next_start()`.
template <class StartSource>
std::optional<std::size_t> first_cover_index(std::span<const double> lengths,
                                             StartSource&& next_start) {
    GapSet gaps;
    for (std::size_t k = 0; k < lengths.size(); ++k) {
        gaps.apply({next_start(), lengths[k]});
        if (gaps.covered()) return k + 1;
    }
    return std::nullopt;
}

/// Replication r of any simulation with master seed s uses StreamRng(s, r).
inline std::optional<std::size_t> first_cover_index(const LengthSequence& seq,
                                                    std::uint64_t seed, std::size_t n_max) {
    const auto lengths = generate(seq, n_max);
    StreamRng rng(seed, 0);
    return first_cover_index(lengths, [&rng] { return rng.uniform(); });
}

struct SimulationResult {
    std::uint64_t seed = 0;
    std::size_t replications = 0;
    std::size_t n_arcs = 0;
    std::size_t covered_count = 0;  // events counted (covered, or pair uncovered)
    double p_hat = 0.0;
    double std_err = 0.0;
};

namespace detail {

inline SimulationResult make_result(std::uint64_t seed, std::size_t reps, std::size_t n,
                                    std::size_t hits) {
    SimulationResult r{seed, reps, n, hits, 0.0, 0.0};
    r.p_hat = static_cast<double>(hits) / static_cast<double>(reps);
    r.std_err = std::sqrt(r.p_hat * (1.0 - r.p_hat) / static_cast<double>(reps));
    return r;
}

inline void check_reps(std::size_t reps) {
    if (reps == 0) throw ValidationError("replications must be >= 1");
}

}  // namespace detail

/// Fraction of replications in which n arcs cover the circle.
inline SimulationResult coverage_probability(std::span<const double> lengths, std::size_t reps,
                                             std::uint64_t seed, unsigned threads = 1) {
    detail::check_reps(reps);
    validate_lengths(lengths);
    std::vector<std::uint8_t> covered(reps, 0);
    parallel_for(reps, threads, [&](std::size_t r) {
        StreamRng rng(seed, r);
        covered[r] = first_cover_index(lengths, [&rng] { return rng.uniform(); }).has_value();
    });
    std::size_t hits = 0;
    for (auto c : covered) hits += c;
    return detail::make_result(seed, reps, lengths.size(), hits);
}

inline SimulationResult coverage_probability(const LengthSequence& seq, std::size_t n,
                                             std::size_t reps, std::uint64_t seed,
                                             unsigned threads = 1) {
    return coverage_probability(generate(seq, n), reps, seed, threads);
}

/// Probability that both 0 and t stay uncovered after independent uniform
/// arcs: prod_k (1 - l_k - min(l_k, t)). Valid for t in (0, 1 - l_1), where
/// the two "arc hits the point" events overlap in measure max(l_k - t, 0).
inline double pair_uncovered_exact(std::span<const double> lengths, double t) {
    validate_lengths(lengths);
    const double upper = lengths.empty() ? 1.0 : 1.0 - lengths.front();
    if (!(t > 0.0 && t < upper))
        throw DomainError("pair probe: t = " + std::to_string(t) + " must lie in (0, " +
                          std::to_string(upper) + ")");
    double p = 1.0;
    for (double l : lengths) p *= 1.0 - l - std::min(l, t);
    return p;
}

/// Monte Carlo estimate of pair_uncovered_exact; covered_count holds the
/// number of replications in which both points stayed uncovered.
inline SimulationResult pair_uncovered_mc(std::span<const double> lengths, double t,
                                          std::size_t reps, std::uint64_t seed,
                                          unsigned threads = 1) {
    detail::check_reps(reps);
    validate_lengths(lengths);
    if (!(t >= 0.0 && t < 1.0)) throw DomainError("pair probe: t must lie in [0, 1)");
    std::vector<std::uint8_t> hit(reps, 0);
    parallel_for(reps, threads, [&](std::size_t r) {
        StreamRng rng(seed, r);
        bool uncovered = true;
        for (double l : lengths) {
            const Arc arc{rng.uniform(), l};
            if (arc.covers(0.0) || arc.covers(t)) uncovered = false;
        }
        hit[r] = uncovered;
    });
    std::size_t hits = 0;
    for (auto h : hit) hits += h;
    return detail::make_result(seed, reps, lengths.size(), hits);
}

struct GapMeasureSample {
    double mean = 0.0;
    double std_err = 0.0;  // sample standard deviation / sqrt(reps)
    double expected = 0.0;  // prod (1 - l_k)
};

/// Sample mean of the uncovered measure after tossing all arcs.
inline GapMeasureSample gap_measure_sample(std::span<const double> lengths, std::size_t reps,
                                           std::uint64_t seed, unsigned threads = 1) {
    detail::check_reps(reps);
    validate_lengths(lengths);
    std::vector<double> total(reps, 0.0);
    parallel_for(reps, threads, [&](std::size_t r) {
        StreamRng rng(seed, r);
        GapSet gaps;
        for (double l : lengths) gaps.apply({rng.uniform(), l});
        total[r] = gaps.total_gap();
    });
    GapMeasureSample out;
    const double nr = static_cast<double>(reps);
    out.mean = compensated_sum(total) / nr;
    CompensatedSum sq;
    for (double x : total) sq += (x - out.mean) * (x - out.mean);
    out.std_err = reps > 1 ? std::sqrt(sq.value() / (nr - 1.0) / nr) : 0.0;
    out.expected = 1.0;
    for (double l : lengths) out.expected *= 1.0 - l;
    return out;
}

}  // namespace shepp

#endif  // SHEPP_COVERING_HPP
