#ifndef SHEPP_CLI_HPP
#define SHEPP_CLI_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <fmt/format.h>
#include "json.hpp"

#include "CLI11.hpp"
#include "shepp/chebyshev.hpp"
#include "shepp/covering.hpp"
#include "shepp/errors.hpp"
#include "shepp/sequences.hpp"
#include "shepp/shepp_integrals.hpp"

namespace shepp::cli {

enum class Format { csv, json };

struct RunConfig {
    std::string command;  // integrate|bound|divergence|criterion|inequality-check|simulate|pair-probe
    std::string sequence_spec;
    std::optional<double> eps;
    std::optional<std::size_t> n;
    std::vector<std::size_t> checkpoints;
    std::optional<std::size_t> reps;
    std::optional<std::uint64_t> seed;
    std::optional<double> t;
    std::size_t trials = 1000;
    std::size_t max_n = 10;
    std::size_t segments = 6;
    Format format = Format::csv;
    std::optional<std::string> out;
    std::size_t quadrature_cap = 2000;
    unsigned threads = 0;
};

// ---------------------------------------------------------------------------
// Table documents
// ---------------------------------------------------------------------------

using Cell = std::variant<std::monostate, std::int64_t, double, bool, std::string>;

struct Document {
    std::string command;
    std::vector<std::pair<std::string, Cell>> config;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline Cell opt_cell(const std::optional<double>& v) {
    return v ? Cell(*v) : Cell(std::monostate{});
}

inline Cell int_cell(std::size_t v) { return Cell(static_cast<std::int64_t>(v)); }

namespace detail {

inline std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

inline std::string csv_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "";
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, double>) return fmt_double(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return csv_quote(v);
        },
        c);
}

// Non-finite doubles have no JSON spelling and become null.
inline std::string json_cell(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) return "null";
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, double>)
                return std::isfinite(v) ? fmt_double(v) : "null";
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return nlohmann::json(v).dump();
        },
        c);
}

inline std::string json_key(const std::string& k) { return nlohmann::json(k).dump(); }

}  // namespace detail

/// CSV: `# key=value` lines echoing the command and config, a header row,
/// then data rows. Floats carry 17 significant digits.
inline std::string to_csv(const Document& doc) {
    std::string s = "# command=" + doc.command + "\n";
    for (const auto& [k, v] : doc.config) s += "# " + k + "=" + detail::csv_cell(v) + "\n";
    for (std::size_t i = 0; i < doc.columns.size(); ++i)
        s += (i ? "," : "") + doc.columns[i];
    s += "\n";
    for (const auto& row : doc.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + detail::csv_cell(row[i]);
        s += "\n";
    }
    return s;
}

/// JSON: {"command", "config": {...}, "rows": [{column: value, ...}]}, same
/// field names and number formatting as CSV.
inline std::string to_json(const Document& doc) {
    std::string s = "{\n  \"command\": " + detail::json_key(doc.command) + ",\n  \"config\": {";
    for (std::size_t i = 0; i < doc.config.size(); ++i)
        s += std::string(i ? ", " : "") + detail::json_key(doc.config[i].first) + ": " +
             detail::json_cell(doc.config[i].second);
    s += "},\n  \"rows\": [";
    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
        s += r ? ",\n    {" : "\n    {";
        for (std::size_t i = 0; i < doc.columns.size(); ++i)
            s += std::string(i ? ", " : "") + detail::json_key(doc.columns[i]) + ": " +
                 detail::json_cell(doc.rows[r][i]);
        s += "}";
    }
    s += doc.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return s;
}

// ---------------------------------------------------------------------------
// Validation and dispatch
// ---------------------------------------------------------------------------

/// Bad configuration; maps to exit status 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"integrate",        "bound",    "divergence",
                                                "criterion",        "simulate", "pair-probe",
                                                "inequality-check"};
    return names;
}

namespace detail {

template <class T>
const T& require(const std::optional<T>& v, const char* flag, const std::string& command) {
    if (!v) throw ConfigError(command + ": missing required option " + flag);
    return *v;
}

inline void require_seq(const RunConfig& c) {
    if (c.sequence_spec.empty()) throw ConfigError(c.command + ": missing required option --seq");
}

inline LengthSequence sequence_of(const RunConfig& c) {
    require_seq(c);
    try {
        return parse_sequence_spec(c.sequence_spec);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("--seq: ") + e.what());
    }
}

// Lengths l_1..l_n, with n = 0 giving the empty list.
inline std::vector<double> lengths_of(const RunConfig& c, std::size_t n) {
    const LengthSequence seq = sequence_of(c);
    if (n == 0) return {};
    try {
        return generate(seq, n);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("--seq/--n: ") + e.what());
    }
}

inline std::vector<std::pair<std::string, Cell>> echo_config(const RunConfig& c) {
    std::vector<std::pair<std::string, Cell>> cfg;
    const auto& cmd = c.command;
    const bool uses_seq = cmd != "inequality-check";
    if (uses_seq) cfg.emplace_back("seq", c.sequence_spec);
    if (c.eps) cfg.emplace_back("eps", *c.eps);
    if (c.n) cfg.emplace_back("n", int_cell(*c.n));
    if (cmd == "divergence") {
        std::string list;
        for (std::size_t i = 0; i < c.checkpoints.size(); ++i)
            list += (i ? "," : "") + std::to_string(c.checkpoints[i]);
        cfg.emplace_back("checkpoints", list);
    }
    if (cmd == "integrate" || cmd == "divergence")
        cfg.emplace_back("quadrature_cap", int_cell(c.quadrature_cap));
    if (c.t) cfg.emplace_back("t", *c.t);
    if (c.reps) cfg.emplace_back("reps", int_cell(*c.reps));
    if (cmd == "inequality-check") {
        cfg.emplace_back("trials", int_cell(c.trials));
        cfg.emplace_back("max_n", int_cell(c.max_n));
        cfg.emplace_back("segments", int_cell(c.segments));
    }
    if (c.seed) cfg.emplace_back("seed", Cell(static_cast<std::int64_t>(*c.seed)));
    cfg.emplace_back("format", std::string(c.format == Format::csv ? "csv" : "json"));
    return cfg;
}

inline Document run_integrate(const RunConfig& c) {
    const double eps = require(c.eps, "--eps", c.command);
    const std::size_t n = require(c.n, "--n", c.command);
    if (n > c.quadrature_cap)
        throw ConfigError("integrate: --n " + std::to_string(n) + " exceeds --quadrature-cap " +
                          std::to_string(c.quadrature_cap));
    const auto lengths = lengths_of(c, n);
    const QuadratureResult q = product_integral(lengths, eps, {c.threads, 1});
    Document d{c.command, echo_config(c),
               {"n", "eps", "value", "log_value", "segment_count", "nodes_per_segment"}, {}};
    d.rows.push_back({int_cell(n), eps, q.value, q.log_value, int_cell(q.segment_count),
                      int_cell(q.nodes_per_segment)});
    return d;
}

inline Document run_bound(const RunConfig& c) {
    const double eps = require(c.eps, "--eps", c.command);
    const std::size_t n = require(c.n, "--n", c.command);
    const auto lengths = lengths_of(c, n);
    const LowerBoundCertificate cert = shepp_lower_bound(lengths, eps);
    Document d{c.command, echo_config(c),
               {"n", "eps", "m", "log_C", "g_log_sum", "bound_log", "chebyshev_log"}, {}};
    d.rows.push_back({int_cell(n), eps, int_cell(cert.m), cert.log_C, cert.g_log_sum,
                      cert.bound_log, chebyshev_lower_bound_log(lengths, eps)});
    return d;
}

inline Document run_divergence(const RunConfig& c) {
    const double eps = require(c.eps, "--eps", c.command);
    if (c.checkpoints.empty()) throw ConfigError("divergence: missing required option --checkpoints");
    const LengthSequence seq = sequence_of(c);
    const auto rows = divergence_table(seq, eps, c.checkpoints, {c.quadrature_cap, c.threads});
    Document d{c.command, echo_config(c), {"n", "log_product_integral", "bound_log", "g_log_sum"}, {}};
    for (const auto& r : rows)
        d.rows.push_back({int_cell(r.n), opt_cell(r.log_product_integral), opt_cell(r.bound_log),
                          opt_cell(r.g_log_sum)});
    return d;
}

inline Document run_criterion(const RunConfig& c) {
    const std::size_t n = require(c.n, "--n", c.command);
    if (n == 0) throw ConfigError("criterion: --n must be >= 1");
    const LengthSequence seq = sequence_of(c);
    lengths_of(c, n);
    const CriterionSeries s = criterion_partial_sums(seq, n);
    Document d{c.command, echo_config(c), {"n", "log_term", "log_partial_sum", "partial_sum"}, {}};
    d.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        d.rows.push_back({int_cell(i + 1), s.partial_log_terms[i], s.partial_log_sums[i],
                          opt_cell(s.partial_sums[i])});
    return d;
}

inline Document run_inequality(const RunConfig& c) {
    const std::uint64_t seed = require(c.seed, "--seed", c.command);
    if (c.trials == 0 || c.max_n == 0 || c.segments == 0)
        throw ConfigError("inequality-check: --trials, --max-n and --segments must be >= 1");
    std::vector<std::vector<Cell>> rows(c.trials);
    parallel_for(c.trials, c.threads, [&](std::size_t trial) {
        StreamRng rng(seed, trial);
        const std::size_t n = rng.uniform_int(1, c.max_n);
        const std::size_t segs = rng.uniform_int(1, c.segments);
        const Direction dir = rng.uniform_int(0, 1) ? Direction::increasing : Direction::decreasing;
        const double eps = rng.uniform(0.1, 2.0);
        const auto fs = random_monotone_family(rng(), n, dir, segs, eps);
        const InequalityCheck r = check_inequality(fs);
        rows[trial] = {int_cell(trial), int_cell(n), r.lhs, r.rhs, r.margin, r.holds};
    });
    return {c.command, echo_config(c), {"trial", "n", "lhs", "rhs", "margin", "holds"},
            std::move(rows)};
}

inline Document run_simulate(const RunConfig& c) {
    const std::size_t n = require(c.n, "--n", c.command);
    const std::size_t reps = require(c.reps, "--reps", c.command);
    const std::uint64_t seed = require(c.seed, "--seed", c.command);
    if (n == 0 || reps == 0) throw ConfigError("simulate: --n and --reps must be >= 1");
    const auto lengths = lengths_of(c, n);
    const SimulationResult r = coverage_probability(lengths, reps, seed, c.threads);
    Document d{c.command, echo_config(c),
               {"seed", "replications", "n_arcs", "covered_count", "p_hat", "std_err"}, {}};
    d.rows.push_back({Cell(static_cast<std::int64_t>(r.seed)), int_cell(r.replications),
                      int_cell(r.n_arcs), int_cell(r.covered_count), r.p_hat, r.std_err});
    return d;
}

inline Document run_pair_probe(const RunConfig& c) {
    const std::size_t n = require(c.n, "--n", c.command);
    const double t = require(c.t, "--t", c.command);
    const std::size_t reps = require(c.reps, "--reps", c.command);
    const std::uint64_t seed = require(c.seed, "--seed", c.command);
    if (reps == 0) throw ConfigError("pair-probe: --reps must be >= 1");
    const auto lengths = lengths_of(c, n);
    const double exact = pair_uncovered_exact(lengths, t);
    const SimulationResult r = pair_uncovered_mc(lengths, t, reps, seed, c.threads);
    Document d{c.command, echo_config(c),
               {"n", "t", "exact", "seed", "replications", "uncovered_count", "p_hat", "std_err"},
               {}};
    d.rows.push_back({int_cell(n), t, exact, Cell(static_cast<std::int64_t>(seed)),
                      int_cell(r.replications), int_cell(r.covered_count), r.p_hat, r.std_err});
    return d;
}

}  // namespace detail

/// Builds the output document. Throws ConfigError, DomainError,
/// ValidationError, ... on bad input.
inline Document build_document(const RunConfig& c) {
    if (c.command == "integrate") return detail::run_integrate(c);
    if (c.command == "bound") return detail::run_bound(c);
    if (c.command == "divergence") return detail::run_divergence(c);
    if (c.command == "criterion") return detail::run_criterion(c);
    if (c.command == "inequality-check") return detail::run_inequality(c);
    if (c.command == "simulate") return detail::run_simulate(c);
    if (c.command == "pair-probe") return detail::run_pair_probe(c);
    throw ConfigError("unknown command '" + c.command + "'");
}

struct RunOutcome {
    int status = 0;  // 0 ok, 1 runtime error, 2 validation error
    std::string document;
    std::string diagnostic;
};

/// Runs one command. Input errors (bad flags, out-of-domain parameters,
/// malformed sequences) give status 2; anything else that fails at run time
/// (I/O, unexpected exceptions) gives status 1.
inline RunOutcome run(const RunConfig& c) {
    RunOutcome out;
    try {
        const Document doc = build_document(c);
        out.document = c.format == Format::csv ? to_csv(doc) : to_json(doc);
    } catch (const ConfigError& e) {
        return {2, "", e.what()};
    } catch (const DomainError& e) {
        return {2, "", c.command + ": " + e.what()};
    } catch (const ValidationError& e) {
        return {2, "", c.command + ": " + e.what()};
    } catch (const LengthError& e) {
        return {2, "", c.command + ": " + e.what()};
    } catch (const ContractError& e) {
        return {2, "", c.command + ": " + e.what()};
    } catch (const std::exception& e) {
        return {1, "", c.command + ": " + e.what()};
    }
    if (c.out) {
        std::ofstream f(*c.out, std::ios::binary);
        f << out.document;
        if (!f) return {1, "", "cannot write output file '" + *c.out + "'"};
        out.document.clear();
    }
    return out;
}

/// Parses argv-style arguments (without the program name) into a config.
/// Returns the exit status instead when parsing stops (errors, --help).
inline std::variant<RunConfig, int> parse_args(std::vector<std::string> args, std::ostream& out,
                                               std::ostream& err) {
    CLI::App app{"Numerical laboratory for Shepp's covering lemma"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string format = "csv";
    std::string checkpoints;
    std::size_t n = 0, reps = 0;
    std::uint64_t seed = 0;
    double eps = 0.0, t = 0.0;

    struct Sub {
        const char* name;
        const char* help;
        bool seq, eps, n, checkpoints, reps, seed, t, cap, inequality;
    };
    const Sub subs[] = {
        {"integrate", "Exact product integral over [0, eps]", true, true, true, false, false, false, false, true, false},
        {"bound", "Lower-bound certificate", true, true, true, false, false, false, false, false, false},
        {"divergence", "Product integral and bound at checkpoints", true, true, false, true, false, false, false, true, false},
        {"criterion", "Partial sums of sum n^-2 exp(l_1+...+l_n)", true, false, true, false, false, false, false, false, false},
        {"inequality-check", "Randomized Chebyshev inequality trials", false, false, false, false, false, true, false, false, true},
        {"simulate", "Monte Carlo coverage probability", true, false, true, false, true, true, false, false, false},
        {"pair-probe", "Two-point uncovered probability, exact vs Monte Carlo", true, false, true, false, true, true, true, false, false},
    };
    std::vector<CLI::App*> apps;
    for (const Sub& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        apps.push_back(sub);
        if (s.seq) sub->add_option("--seq", cfg.sequence_spec, "family:key=value,...")->required();
        if (s.eps) sub->add_option("--eps", eps, "Window [0, eps]")->required();
        if (s.n) sub->add_option("--n", n, "Number of lengths")->required();
        if (s.checkpoints)
            sub->add_option("--checkpoints", checkpoints, "Ascending comma-separated n values")
                ->required();
        if (s.reps) sub->add_option("--reps", reps, "Replications")->required();
        if (s.seed) sub->add_option("--seed", seed, "Master seed")->required();
        if (s.t) sub->add_option("--t", t, "Second probe point")->required();
        if (s.cap) sub->add_option("--quadrature-cap", cfg.quadrature_cap, "Max n for exact quadrature");
        if (s.inequality) {
            sub->add_option("--trials", cfg.trials, "Number of random families");
            sub->add_option("--max-n", cfg.max_n, "Largest family size");
            sub->add_option("--segments", cfg.segments, "Largest number of linear pieces");
        }
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", cfg.out, "Write the document here instead of stdout");
        sub->add_option("--threads", cfg.threads, "Worker cap; 0 = all cores");
    }

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    for (std::size_t i = 0; i < apps.size(); ++i) {
        CLI::App* sub = apps[i];
        if (!sub->parsed()) continue;
        const Sub& s = subs[i];
        cfg.command = s.name;
        if (s.eps) cfg.eps = eps;
        if (s.n) cfg.n = n;
        if (s.reps) cfg.reps = reps;
        if (s.seed) cfg.seed = seed;
        if (s.t) cfg.t = t;
        if (s.checkpoints) {
            std::stringstream ss(checkpoints);
            std::string item;
            while (std::getline(ss, item, ',')) {
                std::size_t used = 0;
                long long v = -1;
                try {
                    v = std::stoll(item, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used == 0 || used != item.size() || v < 0) {
                    err << "--checkpoints: '" << item << "' is not a nonnegative integer\n";
                    return 2;
                }
                cfg.checkpoints.push_back(static_cast<std::size_t>(v));
            }
        }
    }
    cfg.format = format == "json" ? Format::json : Format::csv;
    return cfg;
}

/// Full command-line entry: parse, run, emit. Returns the exit status.
inline int main_entry(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    auto parsed = parse_args(std::move(args), out, err);
    if (const int* status = std::get_if<int>(&parsed)) return *status;
    const RunOutcome r = run(std::get<RunConfig>(parsed));
    if (r.status != 0) {
        err << "error: " << r.diagnostic << "\n";
        return r.status;
    }
    out << r.document;
    return 0;
}

}  // namespace shepp::cli

#endif  // SHEPP_CLI_HPP
