// f-war: top cards are played, the winner is chosen with probability
// proportional to the strength f(card), and collects all played cards at the
// back of her queue in uniformly random order. Tracks the per-player hand
// strengths M and accumulated cross-strength increments Q whose combination
// sum(M^2 - Q) is a martingale.
#pragma once

#include <cmath>
#include <deque>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "warsim/composition.hpp"
#include "warsim/config.hpp"
#include "warsim/random.hpp"
#include "warsim/runner.hpp"

namespace warsim {

// Card strength. Requires f(0) = 0 (empty-hand marker) and f(a) > 0 for real
// ranks, so eliminated players can never win a round.
struct StrengthFunction {
    std::string id;
    std::function<double(Rank)> value;
};

// Built-in strengths for a deck of ranks [n]: "affine" is the a + n instance
// the termination bounds are stated for.
inline StrengthFunction strength_function(const std::string& id, int n) {
    StrengthFunction f;
    f.id = id;
    if (id == "affine") {
        f.value = [n](Rank a) { return a == 0 ? 0.0 : static_cast<double>(a + n); };
    } else if (id == "constant") {
        f.value = [](Rank a) { return a == 0 ? 0.0 : 1.0; };
    } else if (id == "quadratic") {
        f.value = [n](Rank a) {
            return a == 0 ? 0.0
                          : static_cast<double>(static_cast<long long>(a) * a +
                                                static_cast<long long>(n) * n);
        };
    } else {
        throw std::invalid_argument("strength_function: unknown id '" + id + "'");
    }
    return f;
}

// Ordered hands (front = next card played) plus incrementally maintained
// M[i] = sum of f over hand i and Q[i] = accumulated f(a_i)(sum f - f(a_i)).
struct FwarState {
    std::vector<std::deque<Rank>> hands;
    long long t = 0;
    std::vector<double> m_strength;
    std::vector<double> q_cross;

    std::size_t nonempty_count() const {
        std::size_t k = 0;
        for (const auto& h : hands)
            if (!h.empty()) ++k;
        return k;
    }

    double q_total() const {
        double q = 0.0;
        for (double v : q_cross) q += v;
        return q;
    }
};

inline std::vector<double> recompute_strengths(const FwarState& state,
                                               const StrengthFunction& f) {
    std::vector<double> m(state.hands.size(), 0.0);
    for (std::size_t i = 0; i < state.hands.size(); ++i)
        for (Rank card : state.hands[i]) m[i] += f.value(card);
    return m;
}

inline FwarState make_fwar_state(std::vector<std::deque<Rank>> hands,
                                 const StrengthFunction& f) {
    FwarState state;
    state.hands = std::move(hands);
    state.m_strength = recompute_strengths(state, f);
    state.q_cross.assign(state.hands.size(), 0.0);
    return state;
}

// Front cards of the current round; 0 marks an empty hand.
inline std::vector<Rank> front_cards(const FwarState& state) {
    std::vector<Rank> tops(state.hands.size(), 0);
    for (std::size_t i = 0; i < state.hands.size(); ++i)
        if (!state.hands[i].empty()) tops[i] = state.hands[i].front();
    return tops;
}

// Win probabilities f(a_i) / sum_j f(a_j) for the current round.
inline std::vector<double> fwar_win_probabilities(const FwarState& state,
                                                  const StrengthFunction& f) {
    const auto tops = front_cards(state);
    std::vector<double> p(tops.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < tops.size(); ++i) {
        p[i] = f.value(tops[i]);
        total += p[i];
    }
    if (total <= 0.0) throw std::logic_error("fwar_win_probabilities: no positive strength");
    for (double& v : p) v /= total;
    return p;
}

namespace detail {

// Scratch buffers reused across rounds in the hot loop.
struct FwarScratch {
    std::vector<double> strength;
    std::vector<double> probs;
    std::vector<Rank> pot;
};

inline void fwar_step_inplace(FwarState& state, const StrengthFunction& f, RandomSource& rng,
                              FwarScratch& scratch) {
    const std::size_t m = state.hands.size();
    scratch.strength.assign(m, 0.0);
    scratch.probs.assign(m, 0.0);
    scratch.pot.clear();

    double total = 0.0;
    std::size_t nonempty = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (state.hands[i].empty()) continue;
        ++nonempty;
        scratch.strength[i] = f.value(state.hands[i].front());
        total += scratch.strength[i];
    }
    if (nonempty < 2) throw std::logic_error("fwar_step: fewer than 2 nonempty hands");
    for (std::size_t i = 0; i < m; ++i) scratch.probs[i] = scratch.strength[i] / total;
    const std::size_t winner = sample_winner(scratch.probs, rng.next_double());

    for (std::size_t i = 0; i < m; ++i) {
        state.q_cross[i] += scratch.strength[i] * (total - scratch.strength[i]);
        if (state.hands[i].empty()) continue;
        scratch.pot.push_back(state.hands[i].front());
        state.hands[i].pop_front();
        state.m_strength[i] -= scratch.strength[i];
    }
    rng.shuffle(scratch.pot);  // "arbitrary order" resolved as uniformly random
    for (Rank card : scratch.pot) state.hands[winner].push_back(card);
    state.m_strength[winner] += total;
    ++state.t;
}

}  // namespace detail

inline FwarState fwar_step(const FwarState& state, const StrengthFunction& f,
                           RandomSource& rng) {
    FwarState next = state;
    detail::FwarScratch scratch;
    detail::fwar_step_inplace(next, f, rng, scratch);
    return next;
}

struct MartingaleCheckF {
    double expected_next = 0.0;  // E[sum M'^2] by enumerating all winners
    double predicted = 0.0;      // sum M^2 + sum f(a_i)(sum f - f(a_i))
};

inline MartingaleCheckF martingale_step_identity_f(const FwarState& state,
                                                   const StrengthFunction& f) {
    if (state.nonempty_count() < 2)
        throw std::logic_error("martingale_step_identity_f: fewer than 2 nonempty hands");
    const auto tops = front_cards(state);
    const std::size_t m = state.hands.size();
    std::vector<double> strength(m, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        strength[i] = f.value(tops[i]);
        total += strength[i];
    }

    MartingaleCheckF out;
    for (std::size_t winner = 0; winner < m; ++winner) {
        if (strength[winner] <= 0.0) continue;
        double sum_sq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double next_m = state.m_strength[i];
            if (i == winner)
                next_m += total - strength[i];
            else
                next_m -= strength[i];
            sum_sq += next_m * next_m;
        }
        out.expected_next += (strength[winner] / total) * sum_sq;
    }
    for (std::size_t i = 0; i < m; ++i) {
        out.predicted += state.m_strength[i] * state.m_strength[i];
        out.predicted += strength[i] * (total - strength[i]);
    }
    return out;
}

// The Claim 3.2 deal: each card lands on an independently uniform player,
// then each hand is uniformly permuted. Hand sizes are binomial, not equal.
inline FwarState claim_deal(int n, int m, const StrengthFunction& f, RandomSource& rng) {
    if (n < 1 || m < 2) throw std::invalid_argument("claim_deal: need n >= 1, m >= 2");
    std::vector<std::vector<Rank>> piles(static_cast<std::size_t>(m));
    for (int card = 1; card <= n; ++card)
        piles[rng.uniform_below(static_cast<std::uint64_t>(m))].push_back(card);
    for (auto& pile : piles) rng.shuffle(pile);
    std::vector<std::deque<Rank>> hands(piles.size());
    for (std::size_t i = 0; i < piles.size(); ++i)
        hands[i].assign(piles[i].begin(), piles[i].end());
    return make_fwar_state(std::move(hands), f);
}

// Equal-split deal: shuffle [n] and cut into m queues of n/m in dealt order.
inline FwarState equal_deal(int n, int m, const StrengthFunction& f, RandomSource& rng) {
    if (m < 2 || n < 1 || n % m != 0)
        throw std::invalid_argument("equal_deal: need m >= 2 and m | n");
    std::vector<Rank> deck(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) deck[static_cast<std::size_t>(i)] = i + 1;
    rng.shuffle(deck);
    std::vector<std::deque<Rank>> hands(static_cast<std::size_t>(m));
    const int per = n / m;
    for (int i = 0; i < m; ++i)
        hands[static_cast<std::size_t>(i)]
            .assign(deck.begin() + static_cast<long>(i) * per,
                    deck.begin() + static_cast<long>(i + 1) * per);
    return make_fwar_state(std::move(hands), f);
}

struct ClaimMoments {
    double mean_sum_m = 0.0;     // E[sum M_0] = (3n^2+n)/2, deterministic
    double mean_sum_m_sq = 0.0;  // E[sum M_0^2] closed form
};

// Initial-strength moments under the claim deal with f(a) = a + n.
inline ClaimMoments claim_moments(int n, int m) {
    if (n < 1 || m < 1) throw std::invalid_argument("claim_moments: need n >= 1, m >= 1");
    const double nd = static_cast<double>(n);
    const double md = static_cast<double>(m);
    ClaimMoments out;
    out.mean_sum_m = (3.0 * nd * nd + nd) / 2.0;
    const double sum_sq = (14.0 * nd * nd * nd + 9.0 * nd * nd + nd) / 6.0;
    out.mean_sum_m_sq = (md - 1.0) / md * sum_sq + (1.0 / md) * out.mean_sum_m * out.mean_sum_m;
    return out;
}

// Full games. The aux diagnostic is the realized sum_i Q_i at termination,
// comparable against 9 n^4 (m-1) / (4m) + O(n^3).
inline RunResult run_fwar(const RunConfig& config, const StrengthFunction& f) {
    if (config.variant != Variant::fwar)
        throw std::invalid_argument("run_fwar: config variant must be fwar");
    config.validate();
    const long long cap = config.effective_round_cap();

    return run_replications(
        config.replications, config.seed, config.threads, config.histogram_bin_width,
        [&](long long, RandomSource& rng) {
            FwarState state = config.deal == DealMode::claim
                                  ? claim_deal(config.n, config.m, f, rng)
                                  : equal_deal(config.n, config.m, f, rng);
            detail::FwarScratch scratch;
            RepOutcome out;
            while (state.nonempty_count() > 1) {
                if (out.rounds >= cap) {
                    out.censored = true;
                    return out;
                }
                detail::fwar_step_inplace(state, f, rng, scratch);
                ++out.rounds;
            }
            out.aux = state.q_total();
            return out;
        });
}

// Expected Q-sum at termination from the optional-stopping argument,
// 9 n^4 (m-1) / (4m) leading term.
inline double claim_q_sum_leading(int n, int m) {
    const double nd = static_cast<double>(n);
    const double md = static_cast<double>(m);
    return 9.0 * nd * nd * nd * nd * (md - 1.0) / (4.0 * md);
}

}  // namespace warsim
