// CSV and manifest emission. All numeric formatting is shortest-round-trip
// via std::to_chars, so emitted files are byte-stable across runs and thread
// counts. CSV is UTF-8, LF line endings, one header row.
#pragma once

#include <charconv>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "warsim/config.hpp"
#include "warsim/stats.hpp"

namespace warsim {

inline const char* kToolVersion = "warsim 0.1.0";

inline std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct WalkRow {
    int n = 0;
    int m = 0;
    long long reps = 0;
    SimSummary summary;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    std::optional<double> exact;
};

inline void write_walk_csv(std::ostream& os, const WalkRow& row) {
    os << "n,m,reps,mean,std_error,median,max,lower_bound,upper_bound";
    if (row.exact) os << ",exact";
    os << "\n";
    os << row.n << "," << row.m << "," << row.reps << "," << fmt_double(row.summary.mean_rounds)
       << "," << fmt_double(row.summary.std_error) << "," << fmt_double(row.summary.median_rounds)
       << "," << row.summary.max_rounds << "," << fmt_double(row.lower_bound) << ","
       << fmt_double(row.upper_bound);
    if (row.exact) os << "," << fmt_double(*row.exact);
    os << "\n";
}

struct SweepRow {
    int n = 0;
    int m = 0;
    double avg = 0.0;
};

inline void write_sweep_header(std::ostream& os) {
    os << "n,m,n_sq,n_sq_over_m_sq,avg,ratio_avg_n_sq\n";
}

inline void write_sweep_row(std::ostream& os, const SweepRow& row) {
    const long long n_sq = static_cast<long long>(row.n) * row.n;
    const double ratio = row.avg / static_cast<double>(n_sq);
    const double n_sq_over_m_sq =
        static_cast<double>(n_sq) / (static_cast<double>(row.m) * row.m);
    os << row.n << "," << row.m << "," << n_sq << "," << fmt_double(n_sq_over_m_sq) << ","
       << fmt_double(row.avg) << "," << fmt_double(ratio) << "\n";
}

inline void write_summary_csv(std::ostream& os, const RunConfig& config,
                              const SimSummary& summary) {
    os << "variant,n,m,replications,completed,censored,mean,std_error,median,max\n";
    os << to_string(config.variant) << "," << (config.variant == Variant::standard_war ? 52 : config.n)
       << "," << config.m << "," << summary.replications << "," << summary.completed << ","
       << summary.censored << "," << fmt_double(summary.mean_rounds) << ","
       << fmt_double(summary.std_error) << "," << fmt_double(summary.median_rounds) << ","
       << summary.max_rounds << "\n";
}

inline void write_histogram_csv(std::ostream& os, const SimSummary& summary,
                                long long bin_width) {
    os << "bin_lower,bin_upper,count\n";
    for (const auto& [lower, count] : summary.histogram)
        os << lower << "," << (lower + bin_width) << "," << count << "\n";
}

inline nlohmann::json summary_to_json(const SimSummary& summary) {
    nlohmann::json h = nlohmann::json::array();
    for (const auto& [lower, count] : summary.histogram) h.push_back({lower, count});
    return {
        {"replications", summary.replications},
        {"completed", summary.completed},
        {"censored", summary.censored},
        {"mean_rounds", summary.mean_rounds},
        {"std_error", summary.std_error},
        {"median_rounds", summary.median_rounds},
        {"max_rounds", summary.max_rounds},
        {"approximate_quantiles", summary.approximate_quantiles},
        {"histogram", std::move(h)},
    };
}

inline nlohmann::json config_to_json(const RunConfig& config) {
    nlohmann::json j = {
        {"variant", to_string(config.variant)},
        {"n", config.variant == Variant::standard_war ? 52 : config.n},
        {"m", config.m},
        {"replications", config.replications},
        {"seed", config.seed},
        {"round_cap", config.effective_round_cap()},
        {"threads", config.threads},
        {"histogram_bin_width", config.histogram_bin_width},
    };
    if (config.initial_sizes) j["initial_sizes"] = *config.initial_sizes;
    if (config.variant == Variant::pwar) j["rule"] = config.rule_id;
    if (config.variant == Variant::fwar) {
        j["strength"] = config.strength_id;
        j["deal"] = config.deal == DealMode::claim ? "claim" : "equal";
    }
    return j;
}

struct ManifestExtras {
    std::optional<std::pair<double, double>> bounds;
    std::optional<double> exact;
    std::optional<double> q_sum_mean;
};

inline nlohmann::json make_manifest(const RunConfig& config, const SimSummary& summary,
                                    double wall_time_seconds, const ManifestExtras& extras = {}) {
    nlohmann::json j = {
        {"tool_version", kToolVersion},
        {"config", config_to_json(config)},
        {"wall_time_seconds", wall_time_seconds},
        {"summary", summary_to_json(summary)},
    };
    if (extras.bounds) j["bounds"] = {{"lower", extras.bounds->first}, {"upper", extras.bounds->second}};
    if (extras.exact) j["exact"] = *extras.exact;
    if (extras.q_sum_mean) j["q_sum_mean"] = *extras.q_sum_mean;
    return j;
}

}  // namespace warsim
