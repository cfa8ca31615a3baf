#ifndef SHEPP_RNG_HPP
#define SHEPP_RNG_HPP

#include <cstdint>
#include <limits>

namespace shepp {

namespace detail {

// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

/// Counter-based random stream.
///
/// Draw i of stream (seed, stream) is mix64(key + (i + 1) * golden), where the
/// key is a hash of the pair. Any replication can construct its own stream
/// from (master seed, replication index) without touching shared state, so
/// results do not depend on the order in which replications run.
class StreamRng {
public:
    using result_type = std::uint64_t;

    constexpr StreamRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(detail::mix64(detail::mix64(seed + detail::kGolden) ^
                             detail::mix64(stream * 0xd1b54a32d192ed03ULL + 1))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    constexpr result_type operator()() noexcept {
        ++counter_;
        return detail::mix64(key_ + counter_ * detail::kGolden);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    constexpr double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * uniform();
    }

    /// Uniform integer in [lo, hi] (inclusive), Lemire's multiply-shift.
    constexpr std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) noexcept {
        const std::uint64_t span = hi - lo + 1;
        if (span == 0) return (*this)();
        const auto wide = static_cast<unsigned __int128>((*this)()) * span;
        return lo + static_cast<std::uint64_t>(wide >> 64);
    }

    constexpr std::uint64_t draws() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace shepp

#endif  // SHEPP_RNG_HPP
