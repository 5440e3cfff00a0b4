// Self-checks wiring the engines against their independent oracles: one-step
// martingale identities by enumeration, the exact solver against closed
// forms, bound containment, rule axioms, and winner-uniformity probes.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "warsim/exact_solver.hpp"
#include "warsim/fwar.hpp"
#include "warsim/pwar.hpp"
#include "warsim/runner.hpp"
#include "warsim/sticky_walk.hpp"

namespace warsim {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Calls fn on every ordered composition of n into m nonnegative parts.
inline void for_each_composition(int n, int m,
                                 const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> parts(static_cast<std::size_t>(m), 0);
    std::function<void(int, int)> gen = [&](int slot, int remaining) {
        if (slot == m - 1) {
            parts[static_cast<std::size_t>(slot)] = remaining;
            fn(parts);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            parts[static_cast<std::size_t>(slot)] = v;
            gen(slot + 1, remaining - v);
        }
    };
    gen(0, n);
}

// E[sum A'^2] = sum A^2 + |C|(|C|-1), exhaustively over all non-absorbing
// compositions with total <= max_n and players <= max_m.
inline CheckResult check_walk_martingale_identity(int max_n, int max_m,
                                                  double tolerance = 1e-12) {
    CheckResult result{"walk sum-of-squares one-step identity", true, ""};
    double worst = 0.0;
    long long states = 0;
    for (int m = 2; m <= max_m; ++m) {
        for (int n = 2; n <= max_n; ++n) {
            for_each_composition(n, m, [&](const std::vector<int>& parts) {
                Composition c(parts);
                if (c.support_count() < 2) return;
                const auto check = martingale_step_identity(c);
                const double rel = std::abs(check.expected_next_sum_sq - check.predicted) /
                                   std::max(1.0, std::abs(check.predicted));
                worst = std::max(worst, rel);
                ++states;
            });
        }
    }
    std::ostringstream os;
    os << states << " states, worst relative error " << worst;
    result.detail = os.str();
    result.pass = worst <= tolerance;
    return result;
}

// E[sum M'^2] = sum M^2 + sum f(a_i)(sum f - f(a_i)) on randomized states.
inline CheckResult check_fwar_martingale_identity(long long state_count, std::uint64_t seed,
                                                  int max_n = 10, int max_m = 4,
                                                  double tolerance = 1e-9) {
    CheckResult result{"f-war strength one-step identity", true, ""};
    RandomSource rng(seed, 0);
    double worst = 0.0;
    const char* ids[] = {"affine", "constant", "quadratic"};
    for (long long s = 0; s < state_count; ++s) {
        const int n = 2 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(max_n - 1)));
        const int m = 2 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(max_m - 1)));
        const StrengthFunction f = strength_function(ids[s % 3], n);
        FwarState state = claim_deal(n, m, f, rng);
        if (state.nonempty_count() < 2) {
            --s;  // resample; absorbing deals carry no one-step identity
            continue;
        }
        const auto check = martingale_step_identity_f(state, f);
        const double rel = std::abs(check.expected_next - check.predicted) /
                           std::max(1.0, std::abs(check.predicted));
        worst = std::max(worst, rel);
    }
    std::ostringstream os;
    os << state_count << " states, worst relative error " << worst;
    result.detail = os.str();
    result.pass = worst <= tolerance;
    return result;
}

// Two-player expected absorption equals the product of the hand sizes.
inline CheckResult check_solver_vs_product(int max_total, double tolerance = 1e-8) {
    CheckResult result{"exact solver vs two-player product form", true, ""};
    SolverOptions opts;
    opts.tolerance = 1e-12;
    double worst = 0.0;
    for (int n = 2; n <= max_total; ++n) {
        AbsorptionSolver solver(n, 2, AbsorbMode::single_survivor, opts);
        for (int a = 1; a < n; ++a) {
            const double h = solver.value(Composition({a, n - a}));
            worst = std::max(worst, std::abs(h - static_cast<double>(a) * (n - a)));
        }
    }
    std::ostringstream os;
    os << "all totals <= " << max_total << ", worst absolute error " << worst;
    result.detail = os.str();
    result.pass = worst <= tolerance;
    return result;
}

// Three-player expected absorption equals
// a1 a2 + a1 a3 + a2 a3 - 2 a1 a2 a3 / (n - 2).
inline CheckResult check_solver_vs_three_player(int max_total, double tolerance = 1e-8) {
    CheckResult result{"exact solver vs three-player closed form", true, ""};
    SolverOptions opts;
    opts.tolerance = 1e-12;
    double worst = 0.0;
    for (int n = 3; n <= max_total; ++n) {
        AbsorptionSolver solver(n, 3, AbsorbMode::single_survivor, opts);
        for (int a1 = 1; a1 <= n - 2; ++a1)
            for (int a2 = 1; a1 + a2 < n; ++a2) {
                const int a3 = n - a1 - a2;
                const double h = solver.value(Composition({a1, a2, a3}));
                worst = std::max(worst, std::abs(h - three_player_expectation(a1, a2, a3)));
            }
    }
    std::ostringstream os;
    os << "all totals <= " << max_total << ", worst absolute error " << worst;
    result.detail = os.str();
    result.pass = worst <= tolerance;
    return result;
}

// First-elimination expectation equals a1 a2 a3 / (n - 2).
inline CheckResult check_first_elimination_formula(int max_total, double tolerance = 1e-8) {
    CheckResult result{"first-elimination solve vs product formula", true, ""};
    SolverOptions opts;
    opts.tolerance = 1e-12;
    double worst = 0.0;
    for (int n = 3; n <= max_total; ++n) {
        AbsorptionSolver solver(n, 3, AbsorbMode::first_elimination, opts);
        for (int a1 = 1; a1 <= n - 2; ++a1)
            for (int a2 = 1; a1 + a2 < n; ++a2) {
                const int a3 = n - a1 - a2;
                const double h = solver.value(Composition({a1, a2, a3}));
                worst = std::max(worst, std::abs(h - sandell_tau1(a1, a2, a3)));
            }
    }
    std::ostringstream os;
    os << "all totals <= " << max_total << ", worst absolute error " << worst;
    result.detail = os.str();
    result.pass = worst <= tolerance;
    return result;
}

// Exactly solved expected times sit inside the martingale bounds.
inline CheckResult check_bounds_containment(int max_n, int max_m, double slack = 1e-8) {
    CheckResult result{"expected-time bounds containment", true, ""};
    SolverOptions opts;
    opts.tolerance = 1e-12;
    long long states = 0;
    double worst_violation = 0.0;
    for (int m = 2; m <= max_m; ++m) {
        for (int n = 2; n <= max_n; ++n) {
            AbsorptionSolver solver(n, m, AbsorbMode::single_survivor, opts);
            for_each_composition(n, m, [&](const std::vector<int>& parts) {
                Composition c(parts);
                const double h = solver.value(c);
                const auto [lower, upper] = theorem_bounds(c);
                worst_violation = std::max(worst_violation, lower - h);
                worst_violation = std::max(worst_violation, h - upper);
                ++states;
            });
        }
    }
    std::ostringstream os;
    os << states << " start states, worst bound violation " << worst_violation;
    result.detail = os.str();
    result.pass = worst_violation <= slack;
    return result;
}

// Monte Carlo means stay within [lower - 4 SE, upper + 4 SE] of the bounds,
// over every canonical start state (partitions of n into <= m parts).
inline CheckResult check_bounds_containment_mc(int max_n, int max_m, long long reps,
                                               std::uint64_t seed, int threads) {
    CheckResult result{"expected-time bounds vs Monte Carlo", true, ""};
    long long states = 0;
    double worst_violation = 0.0;
    std::string worst_state;
    for (int m = 2; m <= max_m; ++m) {
        for (int n = 2; n <= max_n; ++n) {
            // Enumerate partitions as descending compositions.
            std::vector<std::vector<int>> partitions;
            std::vector<int> parts;
            std::function<void(int, int)> rec = [&](int remaining, int max_part) {
                if (static_cast<int>(parts.size()) == m) {
                    if (remaining == 0) partitions.push_back(parts);
                    return;
                }
                const int slots = m - static_cast<int>(parts.size());
                for (int p = std::min(remaining, max_part); p >= 0; --p) {
                    if (static_cast<long long>(p) * slots < remaining) break;
                    parts.push_back(p);
                    rec(remaining - p, p);
                    parts.pop_back();
                }
            };
            rec(n, n);

            for (const auto& sizes : partitions) {
                Composition c(sizes);
                if (c.support_count() < 2) continue;
                const auto [lower, upper] = theorem_bounds(c);
                const long long cap = 100LL * n * n;
                const RunResult run = run_replications(
                    reps, seed + static_cast<std::uint64_t>(states), threads, 50,
                    [&](long long, RandomSource& rng) {
                        const AbsorptionResult r = absorption_time(c, rng, cap);
                        return RepOutcome{r.rounds, r.censored, 0.0};
                    });
                const double se = run.summary.std_error;
                const double lo = lower - 4.0 * se;
                const double hi = upper + 4.0 * se;
                const double violation =
                    std::max(lo - run.summary.mean_rounds, run.summary.mean_rounds - hi);
                if (violation > worst_violation) {
                    worst_violation = violation;
                    worst_state = c.to_string();
                }
                ++states;
            }
        }
    }
    std::ostringstream os;
    os << states << " start states, worst band violation " << worst_violation;
    if (!worst_state.empty()) os << " at " << worst_state;
    result.detail = os.str();
    result.pass = worst_violation <= 0.0;
    return result;
}

// Winning-rule axioms on sampled legal configurations.
inline CheckResult check_rule_axioms(const WinningRule& rule, int max_n, int max_m,
                                     long long samples_per_config, std::uint64_t seed) {
    CheckResult result{"rule axioms: " + rule.id, true, ""};
    long long checked = 0;
    for (int m = 2; m <= max_m; ++m) {
        for (int n = 1; n <= max_n; ++n) {
            RandomSource rng(seed, static_cast<std::uint64_t>(m * 1000 + n));
            const ValidationReport report = validate_rule(rule, n, m, samples_per_config, rng);
            checked += report.samples_checked;
            if (!report.ok()) {
                result.pass = false;
                result.detail = "violation of " + report.violations.front().axiom + " at " +
                                report.violations.front().witness;
                return result;
            }
        }
    }
    std::ostringstream os;
    os << checked << " sampled configurations, no violations";
    result.detail = os.str();
    return result;
}

// Single-round winner distribution is uniform on active players for
// symmetric rules under uniform deals; a non-equivariant rule is far from it.
inline CheckResult check_winner_uniformity(std::uint64_t seed, long long reps = 10'000,
                                           double tv_limit = 0.02) {
    CheckResult result{"single-round winner uniformity", true, ""};
    const WinningRule rule = builtin_rule(BuiltinRule::highest_card);
    const std::vector<std::vector<int>> starts = {{2, 2}, {3, 2, 1}, {4, 4, 4}};
    std::ostringstream os;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        RandomSource rng(seed, 100 + i);
        const auto report = equivalence_check(Composition(starts[i]), rule, reps, rng);
        os << Composition(starts[i]).to_string() << " tv=" << report.tv_distance << " ";
        if (report.tv_distance > tv_limit || report.update_mismatches != 0) result.pass = false;
    }

    WinningRule always_first;
    always_first.id = "always_first";
    always_first.symmetric = false;
    always_first.evaluate = [](std::span<const PlayedCard> played,
                               std::span<const std::vector<Rank>>) {
        std::vector<double> p(played.size(), 0.0);
        p[0] = 1.0;
        return p;
    };
    RandomSource rng(seed, 999);
    const auto control = equivalence_check(Composition({2, 2}), always_first, reps, rng);
    os << "negative-control tv=" << control.tv_distance;
    if (control.tv_distance < 0.4) result.pass = false;
    result.detail = os.str();
    return result;
}

// Walk Monte Carlo means agree with the exact solver within 4 standard errors.
inline CheckResult check_mc_vs_exact(long long reps, std::uint64_t seed, int threads) {
    CheckResult result{"walk Monte Carlo vs exact solver", true, ""};
    const std::vector<std::pair<int, int>> configs = {{8, 2}, {8, 4}, {9, 3}};
    std::ostringstream os;
    SolverOptions opts;
    opts.tolerance = 1e-12;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto [n, m] = configs[i];
        const Composition start = Composition::equal_split(n, m);
        AbsorptionSolver solver(n, m, AbsorbMode::single_survivor, opts);
        const double exact = solver.value(start);
        const long long cap = 100LL * n * n;
        const RunResult run = run_replications(
            reps, seed + i, threads, 50, [&](long long, RandomSource& rng) {
                const AbsorptionResult r = absorption_time(start, rng, cap);
                return RepOutcome{r.rounds, r.censored, 0.0};
            });
        const double err = std::abs(run.summary.mean_rounds - exact);
        os << "(" << n << "," << m << ") mean=" << run.summary.mean_rounds << " exact=" << exact
           << " se=" << run.summary.std_error << " ";
        if (err > 4.0 * run.summary.std_error) result.pass = false;
    }
    result.detail = os.str();
    return result;
}

struct VerifyOptions {
    int max_n = 12;
    int max_m = 4;
    std::uint64_t seed = 987654321;
    int threads = 1;
    std::optional<WinningRule> injected_rule;  // extra rule to validate
};

inline std::vector<CheckResult> run_verification(const VerifyOptions& options) {
    std::vector<CheckResult> results;
    results.push_back(check_walk_martingale_identity(options.max_n, options.max_m));
    results.push_back(check_fwar_martingale_identity(1000, options.seed));
    results.push_back(check_solver_vs_product(20));
    results.push_back(check_solver_vs_three_player(15));
    results.push_back(check_first_elimination_formula(15));
    results.push_back(check_bounds_containment(std::min(options.max_n, 15), options.max_m));
    results.push_back(check_rule_axioms(builtin_rule(BuiltinRule::uniform_active),
                                        std::min(options.max_n, 10), options.max_m, 50,
                                        options.seed));
    results.push_back(check_rule_axioms(builtin_rule(BuiltinRule::highest_card),
                                        std::min(options.max_n, 10), options.max_m, 50,
                                        options.seed));
    results.push_back(check_winner_uniformity(options.seed));
    results.push_back(check_mc_vs_exact(10'000, options.seed, options.threads));
    if (options.injected_rule) {
        results.push_back(check_rule_axioms(*options.injected_rule, std::min(options.max_n, 8),
                                            std::min(options.max_m, 3), 50, options.seed));
    }
    return results;
}

}  // namespace warsim
