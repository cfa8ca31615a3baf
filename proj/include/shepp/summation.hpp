#ifndef SHEPP_SUMMATION_HPP
#define SHEPP_SUMMATION_HPP

#include <cmath>
#include <limits>
#include <span>

namespace shepp {

/// Neumaier's variant of Kahan summation. Keeps the running error term so
/// that long sums of small increments (e.g. 10^6 values of log g(l_k), each
/// of order l_k^2) are not swamped by the accumulated total.
class CompensatedSum {
public:
    CompensatedSum() = default;
    explicit CompensatedSum(double initial) : sum_(initial) {}

    CompensatedSum& operator+=(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        return *this;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) noexcept {
    CompensatedSum s;
    for (double x : xs) s += x;
    return s.value();
}

/// Running log(sum_i exp(a_i)) accumulator.
///
/// Stores the sum as exp(shift) * scaled, where shift is the largest log
/// term seen so far; the scaled part is compensated. Starting state is the
/// empty sum, log 0 = -inf.
class LogSumExp {
public:
    void add(double log_term) noexcept {
        if (log_term == -std::numeric_limits<double>::infinity()) return;
        if (empty_) {
            shift_ = log_term;
            scaled_ = CompensatedSum(1.0);
            empty_ = false;
            return;
        }
        if (log_term > shift_) {
            const double factor = std::exp(shift_ - log_term);
            scaled_ = CompensatedSum(scaled_.value() * factor);
            shift_ = log_term;
            scaled_ += 1.0;
        } else {
            scaled_ += std::exp(log_term - shift_);
        }
    }

    double log_value() const noexcept {
        if (empty_) return -std::numeric_limits<double>::infinity();
        return shift_ + std::log(scaled_.value());
    }

    bool empty() const noexcept { return empty_; }

private:
    bool empty_ = true;
    double shift_ = 0.0;
    CompensatedSum scaled_;
};

inline double log_sum_exp(std::span<const double> log_terms) noexcept {
    LogSumExp acc;
    for (double v : log_terms) acc.add(v);
    return acc.log_value();
}

}  // namespace shepp

#endif  // SHEPP_SUMMATION_HPP
