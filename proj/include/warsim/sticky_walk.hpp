// Sticky random walk on the discrete simplex: a uniformly chosen support
// coordinate gains |support|-1, every other support coordinate loses 1, and
// zero coordinates stay zero. Absorption = one coordinate holds everything.
#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "warsim/composition.hpp"
#include "warsim/config.hpp"
#include "warsim/random.hpp"
#include "warsim/runner.hpp"

namespace warsim {

struct WalkState {
    Composition position;
    long long t = 0;
};

inline WalkState walk_step(const WalkState& state, RandomSource& rng) {
    const auto support = state.position.support();
    const std::size_t k = support.size();
    if (k < 2) throw std::logic_error("walk_step: state is absorbing");

    const std::size_t winner = support[rng.uniform_below(k)];
    std::vector<int> next = state.position.sizes();
    for (std::size_t i : support) --next[i];
    next[winner] += static_cast<int>(k);
    return WalkState{Composition(std::move(next)), state.t + 1};
}

struct AbsorptionResult {
    long long rounds = 0;
    bool censored = false;
};

inline AbsorptionResult absorption_time(const Composition& start, RandomSource& rng,
                                        long long round_cap) {
    // Compact in-place trajectory: sizes plus a dense list of live indices.
    std::vector<int> pos = start.sizes();
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < pos.size(); ++i)
        if (pos[i] > 0) active.push_back(i);

    long long rounds = 0;
    while (active.size() > 1) {
        if (rounds >= round_cap) return {round_cap, true};
        const std::size_t k = active.size();
        const std::size_t winner_slot = static_cast<std::size_t>(rng.uniform_below(k));
        pos[active[winner_slot]] += static_cast<int>(k);
        for (std::size_t slot = 0; slot < active.size();) {
            if (--pos[active[slot]] == 0) {
                active[slot] = active.back();
                active.pop_back();
            } else {
                ++slot;
            }
        }
        ++rounds;
    }
    return {rounds, false};
}

// Endpoints of E[tau] in [(n^2 - sum A_i^2)/(m(m-1)), (n^2 - sum A_i^2)/2].
inline std::pair<double, double> theorem_bounds(const Composition& start) {
    const double m = static_cast<double>(start.players());
    const double gap = static_cast<double>(start.total() * start.total() - start.sum_of_squares());
    return {gap / (m * (m - 1.0)), gap / 2.0};
}

// Expected 3-player absorption time,
// a1*a2 + a1*a3 + a2*a3 - 2*a1*a2*a3/(n-2).
inline double three_player_expectation(int a1, int a2, int a3) {
    const long long n = static_cast<long long>(a1) + a2 + a3;
    if (a1 < 1 || a2 < 1 || a3 < 1)
        throw std::invalid_argument("three_player_expectation: hands must be >= 1");
    if (n <= 2) throw std::invalid_argument("three_player_expectation: need n > 2");
    const double pairs = static_cast<double>(static_cast<long long>(a1) * a2 +
                                             static_cast<long long>(a1) * a3 +
                                             static_cast<long long>(a2) * a3);
    const double triple = static_cast<double>(static_cast<long long>(a1) * a2 * a3);
    return pairs - 2.0 * triple / static_cast<double>(n - 2);
}

// Sandell's expected first-elimination time, a1*a2*a3/(n-2).
inline double sandell_tau1(int a1, int a2, int a3) {
    const long long n = static_cast<long long>(a1) + a2 + a3;
    if (n <= 2) throw std::invalid_argument("sandell_tau1: need n > 2");
    return static_cast<double>(static_cast<long long>(a1) * a2 * a3) /
           static_cast<double>(n - 2);
}

inline RunResult run_walk(const RunConfig& config) {
    if (config.variant != Variant::sticky_walk)
        throw std::invalid_argument("run_walk: config variant must be sticky_walk");
    config.validate();
    const Composition start = config.start_composition();
    const long long cap = config.effective_round_cap();
    return run_replications(
        config.replications, config.seed, config.threads, config.histogram_bin_width,
        [&](long long, RandomSource& rng) {
            const AbsorptionResult r = absorption_time(start, rng, cap);
            return RepOutcome{r.rounds, r.censored, 0.0};
        });
}

struct MartingaleCheck {
    double expected_next_sum_sq = 0.0;
    double predicted = 0.0;
};

// One-step identity behind the sum-of-squares martingale:
// E[sum A_{t+1}^2] = sum A_t^2 + |C|(|C|-1), by full enumeration of the |C|
// equally likely winners. All arithmetic is integer-exact.
inline MartingaleCheck martingale_step_identity(const Composition& position) {
    const auto support = position.support();
    const long long k = static_cast<long long>(support.size());
    if (k < 2) throw std::logic_error("martingale_step_identity: absorbing state");

    long long total_next_sq = 0;
    for (std::size_t winner : support) {
        std::vector<int> next = position.sizes();
        for (std::size_t i : support) --next[i];
        next[winner] += static_cast<int>(k);
        long long sq = 0;
        for (int v : next) sq += static_cast<long long>(v) * v;
        total_next_sq += sq;
    }
    MartingaleCheck out;
    out.expected_next_sum_sq = static_cast<double>(total_next_sq) / static_cast<double>(k);
    out.predicted = static_cast<double>(position.sum_of_squares() + k * (k - 1));
    return out;
}

}  // namespace warsim
