#ifndef SHEPP_SEQUENCES_HPP
#define SHEPP_SEQUENCES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shepp/errors.hpp"

namespace shepp {

enum class Family { constant, harmonic, inverse_sqrt, power_decay, explicit_list };

inline std::string_view family_name(Family f) noexcept {
    switch (f) {
        case Family::constant: return "constant";
        case Family::harmonic: return "harmonic";
        case Family::inverse_sqrt: return "inverse-sqrt";
        case Family::power_decay: return "power-decay";
        case Family::explicit_list: return "explicit";
    }
    return "unknown";
}

/**
 * Arc-length sequence l_1 >= l_2 >= ... with every term in (0, 1).
 *
 * Parametric families produce l_k = min(cap, raw_k) with raw_k one of
 *   constant      c
 *   harmonic      c / k
 *   inverse-sqrt  c / sqrt(k)
 *   power-decay   c * k^(-alpha)
 * The cap exists because c/k and friends exceed 1 for small k. It changes
 * finitely many terms only, so neither divergence of sum l_k^2 nor the
 * covering criterion sum n^-2 exp(l_1 + ... + l_n) is affected.
 *
 * "Decreasing" is taken as nonincreasing: ties are allowed, so constant
 * sequences are valid.
 *
 * The explicit family returns prefixes of a stored list unchanged (no cap).
 */
struct LengthSequence {
    Family family = Family::harmonic;
    double c = 1.0;
    double alpha = 1.0;
    double cap = 0.99;
    std::vector<double> values;

    static LengthSequence constant(double c, double cap = 0.99) {
        return {Family::constant, c, 0.0, cap, {}};
    }
    static LengthSequence harmonic(double c, double cap = 0.99) {
        return {Family::harmonic, c, 1.0, cap, {}};
    }
    static LengthSequence inverse_sqrt(double c, double cap = 0.99) {
        return {Family::inverse_sqrt, c, 0.5, cap, {}};
    }
    static LengthSequence power_decay(double c, double alpha, double cap = 0.99) {
        return {Family::power_decay, c, alpha, cap, {}};
    }
    static LengthSequence explicit_list(std::vector<double> values) {
        return {Family::explicit_list, 1.0, 0.0, 0.99, std::move(values)};
    }
};

/// Throws ValidationError unless `lengths` is nonincreasing inside (0,1).
inline void validate_lengths(std::span<const double> lengths) {
    for (std::size_t k = 0; k < lengths.size(); ++k) {
        const double l = lengths[k];
        if (!(l > 0.0 && l < 1.0))
            throw ValidationError("length l_" + std::to_string(k + 1) + " = " +
                                  std::to_string(l) + " is outside (0,1)");
        if (k > 0 && l > lengths[k - 1])
            throw ValidationError("lengths must be nonincreasing: l_" + std::to_string(k + 1) +
                                  " > l_" + std::to_string(k));
    }
}

inline void validate_parameters(const LengthSequence& seq) {
    if (seq.family == Family::explicit_list) return;
    if (!(seq.c > 0.0) || !std::isfinite(seq.c))
        throw ValidationError("sequence parameter c must be a positive real");
    if (!(seq.cap > 0.0 && seq.cap < 1.0))
        throw ValidationError("sequence parameter cap must lie in (0,1)");
    if (seq.family == Family::power_decay && !(seq.alpha >= 0.0 && std::isfinite(seq.alpha)))
        throw ValidationError("sequence parameter alpha must be nonnegative");
}

/// k is 1-based. No validation; see generate().
inline double term(const LengthSequence& seq, std::size_t k) {
    const double kk = static_cast<double>(k);
    double raw = seq.c;
    switch (seq.family) {
        case Family::constant: break;
        case Family::harmonic: raw = seq.c / kk; break;
        case Family::inverse_sqrt: raw = seq.c / std::sqrt(kk); break;
        case Family::power_decay: raw = seq.c * std::pow(kk, -seq.alpha); break;
        case Family::explicit_list: return seq.values.at(k - 1);
    }
    return std::min(seq.cap, raw);
}

/// First n terms l_1, ..., l_n.
inline std::vector<double> generate(const LengthSequence& seq, std::size_t n) {
    if (n == 0) throw ValidationError("generate: n must be >= 1");
    validate_parameters(seq);
    std::vector<double> out;
    if (seq.family == Family::explicit_list) {
        if (seq.values.size() < n)
            throw LengthError("explicit list has " + std::to_string(seq.values.size()) +
                              " values, " + std::to_string(n) + " requested");
        out.assign(seq.values.begin(), seq.values.begin() + static_cast<std::ptrdiff_t>(n));
    } else {
        out.reserve(n);
        for (std::size_t k = 1; k <= n; ++k) out.push_back(term(seq, k));
    }
    validate_lengths(out);
    return out;
}

struct EpsilonWindow {
    double eps = 0.0;
    double upper = 0.0;          // 1 - l_1
    bool bound_path_ok = false;  // eps < 1/2
};

inline EpsilonWindow epsilon_window(double first_length, double eps) {
    const double upper = 1.0 - first_length;
    if (!(eps > 0.0))
        throw DomainError("eps = " + std::to_string(eps) + " violates eps > 0");
    if (!(eps < upper))
        throw DomainError("eps = " + std::to_string(eps) + " violates eps < 1 - l_1 = " +
                          std::to_string(upper));
    return {eps, upper, eps < 0.5};
}

inline EpsilonWindow epsilon_window(const LengthSequence& seq, double eps) {
    return epsilon_window(generate(seq, 1).front(), eps);
}

/// Number m of leading terms with l_k >= eps, so that l_k < eps for all
/// k > m. This is the smallest index with that property.
inline std::size_t threshold_index(std::span<const double> lengths, double eps) {
    const auto it = std::partition_point(lengths.begin(), lengths.end(),
                                         [eps](double l) { return l >= eps; });
    return static_cast<std::size_t>(it - lengths.begin());
}

inline std::size_t threshold_index(const LengthSequence& seq, double eps, std::size_t n) {
    const auto lengths = generate(seq, n);
    epsilon_window(lengths.front(), eps);
    return threshold_index(lengths, eps);
}

/// Reads one decimal per line; blank lines and '#' comments are skipped and
/// commas are accepted as extra separators.
inline std::vector<double> read_lengths_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open sequence file '" + path + "'");
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::string tok;
        while (fields >> tok) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size())
                throw ValidationError(path + ":" + std::to_string(line_no) + ": '" + tok +
                                      "' is not a number");
            values.push_back(v);
        }
    }
    return values;
}

namespace detail {

inline double parse_real(std::string_view key, std::string_view text) {
    const std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw ValidationError("sequence parameter " + std::string(key) + " = '" + s +
                              "' is not a number");
    return v;
}

}  // namespace detail

/**
 * Parses `family:key=value,...`, e.g. `harmonic:c=1,cap=0.99`,
 * `power-decay:c=0.8,alpha=0.6`, `explicit:file=lengths.txt`.
 * Keys: c, cap, alpha (power-decay), file (explicit). Unknown keys are errors.
 */
inline LengthSequence parse_sequence_spec(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string_view name = spec.substr(0, colon);
    const std::string_view params = colon == std::string_view::npos ? "" : spec.substr(colon + 1);

    LengthSequence seq;
    if (name == "constant") seq = LengthSequence::constant(1.0);
    else if (name == "harmonic") seq = LengthSequence::harmonic(1.0);
    else if (name == "inverse-sqrt") seq = LengthSequence::inverse_sqrt(1.0);
    else if (name == "power-decay") seq = LengthSequence::power_decay(1.0, 1.0);
    else if (name == "explicit") seq = LengthSequence::explicit_list({});
    else throw ValidationError("unknown sequence family '" + std::string(name) + "'");

    bool have_file = false;
    std::size_t pos = 0;
    while (pos < params.size()) {
        auto comma = params.find(',', pos);
        if (comma == std::string_view::npos) comma = params.size();
        const std::string_view item = params.substr(pos, comma - pos);
        pos = comma + 1;
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw ValidationError("sequence parameter '" + std::string(item) + "' lacks '='");
        const std::string_view key = item.substr(0, eq);
        const std::string_view val = item.substr(eq + 1);
        if (seq.family == Family::explicit_list) {
            if (key != "file")
                throw ValidationError("explicit sequences take only file=..., got '" +
                                      std::string(key) + "'");
            seq.values = read_lengths_file(std::string(val));
            have_file = true;
        } else if (key == "c") {
            seq.c = detail::parse_real(key, val);
        } else if (key == "cap") {
            seq.cap = detail::parse_real(key, val);
        } else if (key == "alpha" && seq.family == Family::power_decay) {
            seq.alpha = detail::parse_real(key, val);
        } else {
            throw ValidationError("unknown parameter '" + std::string(key) + "' for family " +
                                  std::string(name));
        }
    }
    if (seq.family == Family::explicit_list && !have_file)
        throw ValidationError("explicit sequence requires file=<path>");
    validate_parameters(seq);
    return seq;
}

}  // namespace shepp

#endif  // SHEPP_SEQUENCES_HPP
