// Command-line front end: experiment runners for the sticky walk and the
// card-level engines, plus the self-verification suite.
//
//   warsim walk   --n 4 --m 2 --reps 1000 --seed 1 --exact
//   warsim sweep  --n-list 32,64 --m-list 2,4,8 --reps 1000 --seed 1
//   warsim pwar   --n 6 --m 3 --rule highest_card --reps 10000 --seed 1
//   warsim fwar   --n 32 --m 2 --strength affine --deal claim --reps 10000 --seed 1
//   warsim war    --players 2 --reps 50000 --seed 1 --hist hist.csv
//   warsim verify --max-n 12 --max-m 4
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "warsim/warsim.hpp"

namespace {

using Clock = std::chrono::steady_clock;

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            values.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": cannot parse '" + item + "'");
        }
    }
    if (values.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return values;
}

// Writes to the path, or stdout when the path is empty.
void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << text;
}

struct CommonArgs {
    long long reps = 1000;
    std::uint64_t seed = 0;
    long long round_cap = 0;
    int threads = 1;
    std::string out_path;
};

void add_common_options(CLI::App& cmd, CommonArgs& args) {
    cmd.add_option("--reps", args.reps, "Replications")->check(CLI::PositiveNumber);
    cmd.add_option("--seed", args.seed, "Base seed; per-replication streams are derived from it")
        ->required();
    cmd.add_option("--round-cap", args.round_cap,
                   "Censor runs at this many rounds (default 100*n^2)");
    cmd.add_option("--threads", args.threads, "Worker threads")->check(CLI::PositiveNumber);
    cmd.add_option("--out", args.out_path, "Write output here instead of stdout");
}

// A fixed-vector rule loaded from a file: line 1 is a comma-separated
// probability vector, an optional line "symmetric" flags it symmetric.
// Useful for feeding deliberately broken rules to the validator.
warsim::WinningRule load_rule_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open rule file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("rule file is empty");
    std::vector<double> probs;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) probs.push_back(std::stod(item));
    warsim::WinningRule rule;
    rule.id = "file:" + path;
    rule.symmetric = false;
    while (std::getline(in, line))
        if (line == "symmetric") rule.symmetric = true;
    rule.evaluate = [probs](std::span<const warsim::PlayedCard> played,
                            std::span<const std::vector<warsim::Rank>>) {
        if (played.size() != probs.size())
            throw std::invalid_argument("rule file: vector length does not match player count");
        return probs;
    };
    return rule;
}

int cmd_walk(const CommonArgs& common, int n, int m, const std::string& sizes_text,
             bool with_exact, const std::string& format) {
    warsim::RunConfig config;
    config.variant = warsim::Variant::sticky_walk;
    config.n = n;
    config.m = m;
    config.replications = common.reps;
    config.seed = common.seed;
    config.round_cap = common.round_cap;
    config.threads = common.threads;
    if (!sizes_text.empty()) {
        config.initial_sizes = parse_int_list(sizes_text, "--sizes");
        config.m = static_cast<int>(config.initial_sizes->size());
        if (m != 0 && m != config.m)
            throw std::invalid_argument("--sizes length does not match --m");
    }
    config.validate();
    const warsim::Composition start = config.start_composition();

    const auto t0 = Clock::now();
    const warsim::RunResult run = warsim::run_walk(config);
    const auto [lower, upper] = warsim::theorem_bounds(start);
    std::optional<double> exact;
    if (with_exact) exact = warsim::exact_expected_absorption(start, 1e-12).expected_time;
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();

    if (format == "json") {
        warsim::ManifestExtras extras;
        extras.bounds = {{lower, upper}};
        extras.exact = exact;
        const auto manifest = warsim::make_manifest(config, run.summary, wall, extras);
        write_text(common.out_path, manifest.dump(2) + "\n");
    } else {
        warsim::WalkRow row{config.n, config.m, config.replications, run.summary, lower, upper,
                            exact};
        std::ostringstream os;
        warsim::write_walk_csv(os, row);
        write_text(common.out_path, os.str());
    }
    return 0;
}

int cmd_sweep(const CommonArgs& common, const std::string& n_list, const std::string& m_list) {
    const std::vector<int> ns = parse_int_list(n_list, "--n-list");
    const std::vector<int> ms = parse_int_list(m_list, "--m-list");
    std::ostringstream os;
    warsim::write_sweep_header(os);
    for (int n : ns) {
        for (int m : ms) {
            if (m < 2 || n % m != 0 || n / m < 2) {
                std::cerr << "sweep: skipping n=" << n << " m=" << m
                          << " (need m | n and n/m >= 2)\n";
                continue;
            }
            warsim::RunConfig config;
            config.variant = warsim::Variant::sticky_walk;
            config.n = n;
            config.m = m;
            config.replications = common.reps;
            config.seed = common.seed;
            config.round_cap = common.round_cap;
            config.threads = common.threads;
            const warsim::RunResult run = warsim::run_walk(config);
            warsim::write_sweep_row(os, {n, m, run.summary.mean_rounds});
        }
    }
    write_text(common.out_path, os.str());
    return 0;
}

struct EngineOutputs {
    std::string manifest_path;
    std::string hist_path;
    long long bin_width = 50;
};

void emit_engine_outputs(const CommonArgs& common, const EngineOutputs& outputs,
                         const warsim::RunConfig& config, const warsim::RunResult& run,
                         double wall, const warsim::ManifestExtras& extras = {}) {
    std::ostringstream os;
    warsim::write_summary_csv(os, config, run.summary);
    write_text(common.out_path, os.str());
    if (!outputs.manifest_path.empty()) {
        const auto manifest = warsim::make_manifest(config, run.summary, wall, extras);
        write_text(outputs.manifest_path, manifest.dump(2) + "\n");
    }
    if (!outputs.hist_path.empty()) {
        std::ostringstream hs;
        warsim::write_histogram_csv(hs, run.summary, outputs.bin_width);
        write_text(outputs.hist_path, hs.str());
    }
}

int cmd_verify(int max_n, int max_m, std::uint64_t seed, int threads,
               const std::string& rule_file) {
    warsim::VerifyOptions options;
    options.max_n = max_n;
    options.max_m = max_m;
    options.seed = seed;
    options.threads = threads;
    if (!rule_file.empty()) options.injected_rule = load_rule_file(rule_file);

    const auto results = warsim::run_verification(options);
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  [" << r.detail << "]\n";
        if (!r.pass) failures.push_back({{"check", r.name}, {"detail", r.detail}});
    }
    if (!failures.empty()) {
        std::cout << nlohmann::json{{"failures", failures}}.dump(2) << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"War-style card games and sticky random walks: simulation and exact computation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key=value config file; flags override file values");

    // walk
    auto* walk = app.add_subcommand("walk", "Sticky-walk absorption time Monte Carlo");
    CommonArgs walk_args;
    int walk_n = 0, walk_m = 0;
    std::string walk_sizes, walk_format = "csv";
    bool walk_exact = false;
    walk->add_option("--n", walk_n, "Total cards")->required();
    walk->add_option("--m", walk_m, "Players");
    walk->add_option("--sizes", walk_sizes, "Comma-separated start sizes overriding equal split");
    walk->add_flag("--exact", walk_exact, "Also solve expected absorption time exactly");
    walk->add_option("--output", walk_format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    add_common_options(*walk, walk_args);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Sticky-walk sweep over (n, m) pairs");
    CommonArgs sweep_args;
    std::string sweep_ns, sweep_ms;
    sweep->add_option("--n-list", sweep_ns, "Comma-separated card counts")->required();
    sweep->add_option("--m-list", sweep_ms, "Comma-separated player counts")->required();
    add_common_options(*sweep, sweep_args);

    // pwar
    auto* pwar = app.add_subcommand("pwar", "p-war card game Monte Carlo");
    CommonArgs pwar_args;
    EngineOutputs pwar_out;
    int pwar_n = 0, pwar_m = 0;
    std::string pwar_rule = "uniform_active", pwar_sizes;
    pwar->add_option("--n", pwar_n, "Deck size")->required();
    pwar->add_option("--m", pwar_m, "Players")->required();
    pwar->add_option("--rule", pwar_rule, "Winning rule id");
    pwar->add_option("--sizes", pwar_sizes, "Comma-separated deal sizes overriding equal split");
    pwar->add_option("--manifest", pwar_out.manifest_path, "Write experiment manifest JSON here");
    pwar->add_option("--hist", pwar_out.hist_path, "Write histogram CSV here");
    pwar->add_option("--bin-width", pwar_out.bin_width, "Histogram bin width in rounds");
    add_common_options(*pwar, pwar_args);

    // fwar
    auto* fwar = app.add_subcommand("fwar", "f-war top-card game Monte Carlo");
    CommonArgs fwar_args;
    EngineOutputs fwar_out;
    int fwar_n = 0, fwar_m = 0;
    std::string fwar_strength = "affine", fwar_deal = "claim";
    fwar->add_option("--n", fwar_n, "Deck size")->required();
    fwar->add_option("--m", fwar_m, "Players")->required();
    fwar->add_option("--strength", fwar_strength, "Strength function id");
    fwar->add_option("--deal", fwar_deal, "Deal mode")->check(CLI::IsMember({"claim", "equal"}));
    fwar->add_option("--manifest", fwar_out.manifest_path, "Write experiment manifest JSON here");
    fwar->add_option("--hist", fwar_out.hist_path, "Write histogram CSV here");
    fwar->add_option("--bin-width", fwar_out.bin_width, "Histogram bin width in rounds");
    add_common_options(*fwar, fwar_args);

    // war
    auto* war = app.add_subcommand("war", "Standard 52-card War Monte Carlo");
    CommonArgs war_args;
    EngineOutputs war_out;
    int war_players = 2;
    bool war_even_only = false;
    war->add_option("--players", war_players, "Player count in [2, 52]")->required();
    war->add_flag("--even-deal-only", war_even_only, "Reject player counts not dividing 52");
    war->add_option("--manifest", war_out.manifest_path, "Write experiment manifest JSON here");
    war->add_option("--hist", war_out.hist_path, "Write histogram CSV here");
    war->add_option("--bin-width", war_out.bin_width, "Histogram bin width in rounds");
    add_common_options(*war, war_args);

    // verify
    auto* verify = app.add_subcommand("verify", "Run the invariant and oracle self-checks");
    int verify_max_n = 12, verify_max_m = 4, verify_threads = 1;
    std::uint64_t verify_seed = 987654321;
    std::string verify_rule_file;
    verify->add_option("--max-n", verify_max_n, "Largest total for exhaustive checks");
    verify->add_option("--max-m", verify_max_m, "Largest player count for exhaustive checks");
    verify->add_option("--seed", verify_seed, "Seed for sampled checks");
    verify->add_option("--threads", verify_threads, "Worker threads for Monte Carlo checks");
    verify->add_option("--rule-file", verify_rule_file,
                       "Also validate a fixed-vector rule loaded from this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*walk) return cmd_walk(walk_args, walk_n, walk_m, walk_sizes, walk_exact, walk_format);
        if (*sweep) return cmd_sweep(sweep_args, sweep_ns, sweep_ms);
        if (*pwar) {
            warsim::RunConfig config;
            config.variant = warsim::Variant::pwar;
            config.n = pwar_n;
            config.m = pwar_m;
            config.rule_id = pwar_rule;
            config.replications = pwar_args.reps;
            config.seed = pwar_args.seed;
            config.round_cap = pwar_args.round_cap;
            config.threads = pwar_args.threads;
            config.histogram_bin_width = pwar_out.bin_width;
            if (!pwar_sizes.empty()) config.initial_sizes = parse_int_list(pwar_sizes, "--sizes");
            config.validate();
            const warsim::WinningRule rule = warsim::find_rule(pwar_rule);
            const auto t0 = Clock::now();
            const warsim::RunResult run = warsim::run_pwar(config, rule);
            const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
            emit_engine_outputs(pwar_args, pwar_out, config, run, wall);
            return 0;
        }
        if (*fwar) {
            warsim::RunConfig config;
            config.variant = warsim::Variant::fwar;
            config.n = fwar_n;
            config.m = fwar_m;
            config.strength_id = fwar_strength;
            config.deal = fwar_deal == "equal" ? warsim::DealMode::equal_split
                                               : warsim::DealMode::claim;
            config.replications = fwar_args.reps;
            config.seed = fwar_args.seed;
            config.round_cap = fwar_args.round_cap;
            config.threads = fwar_args.threads;
            config.histogram_bin_width = fwar_out.bin_width;
            config.validate();
            const warsim::StrengthFunction f =
                warsim::strength_function(fwar_strength, fwar_n);
            const auto t0 = Clock::now();
            const warsim::RunResult run = warsim::run_fwar(config, f);
            const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
            warsim::ManifestExtras extras;
            extras.q_sum_mean = run.aux_mean;
            emit_engine_outputs(fwar_args, fwar_out, config, run, wall, extras);
            std::cerr << "q_sum_mean=" << warsim::fmt_double(run.aux_mean)
                      << " ratio_to_leading="
                      << warsim::fmt_double(run.aux_mean /
                                            warsim::claim_q_sum_leading(fwar_n, fwar_m))
                      << "\n";
            return 0;
        }
        if (*war) {
            warsim::RunConfig config;
            config.variant = warsim::Variant::standard_war;
            config.m = war_players;
            config.allow_uneven_deal = !war_even_only;
            config.replications = war_args.reps;
            config.seed = war_args.seed;
            config.round_cap = war_args.round_cap;
            config.threads = war_args.threads;
            config.histogram_bin_width = war_out.bin_width;
            config.validate();
            if (war_even_only && warsim::kDeckSize % war_players != 0)
                throw std::invalid_argument("war: player count must divide 52 with --even-deal-only");
            const auto t0 = Clock::now();
            const warsim::RunResult run = warsim::run_standard_war(config);
            const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
            emit_engine_outputs(war_args, war_out, config, run, wall);
            return 0;
        }
        if (*verify)
            return cmd_verify(verify_max_n, verify_max_m, verify_seed, verify_threads,
                              verify_rule_file);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
