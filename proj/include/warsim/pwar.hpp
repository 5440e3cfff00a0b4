// p-war: cards are drawn uniformly from unordered hands, the round winner is
// drawn from a winning rule's probability vector, and the winner collects
// everything played that round.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "warsim/composition.hpp"
#include "warsim/config.hpp"
#include "warsim/random.hpp"
#include "warsim/runner.hpp"
#include "warsim/stats.hpp"

namespace warsim {

// Unplayed marker. A distinct sentinel rather than rank 0, so rules cannot
// accidentally order it against real ranks.
using PlayedCard = std::optional<Rank>;

// Maps (played cards, remaining hands) to a probability vector over players.
// Required: output on the simplex; probability 0 for players with no card
// played and no hand left; permutation equivariance. Rules flagged symmetric
// must ignore the assignment of remaining hands to players.
struct WinningRule {
    std::string id;
    bool symmetric = false;
    std::function<std::vector<double>(std::span<const PlayedCard>,
                                      std::span<const std::vector<Rank>>)>
        evaluate;
};

enum class BuiltinRule { uniform_active, highest_card };

inline WinningRule builtin_rule(BuiltinRule which) {
    switch (which) {
        case BuiltinRule::uniform_active: {
            WinningRule rule;
            rule.id = "uniform_active";
            rule.symmetric = true;
            rule.evaluate = [](std::span<const PlayedCard> played,
                               std::span<const std::vector<Rank>>) {
                std::vector<double> p(played.size(), 0.0);
                std::size_t active = 0;
                for (const auto& card : played)
                    if (card) ++active;
                if (active == 0) throw std::logic_error("uniform_active: no card played");
                for (std::size_t i = 0; i < played.size(); ++i)
                    if (played[i]) p[i] = 1.0 / static_cast<double>(active);
                return p;
            };
            return rule;
        }
        case BuiltinRule::highest_card: {
            WinningRule rule;
            rule.id = "highest_card";
            rule.symmetric = true;
            rule.evaluate = [](std::span<const PlayedCard> played,
                               std::span<const std::vector<Rank>>) {
                std::vector<double> p(played.size(), 0.0);
                Rank best = 0;
                std::size_t best_count = 0;
                for (const auto& card : played) {
                    if (!card) continue;  // unplayed ranks below every rank
                    if (best_count == 0 || *card > best) {
                        best = *card;
                        best_count = 1;
                    } else if (*card == best) {
                        ++best_count;
                    }
                }
                if (best_count == 0) throw std::logic_error("highest_card: no card played");
                for (std::size_t i = 0; i < played.size(); ++i)
                    if (played[i] && *played[i] == best)
                        p[i] = 1.0 / static_cast<double>(best_count);
                return p;
            };
            return rule;
        }
    }
    throw std::invalid_argument("builtin_rule: unknown rule");
}

inline std::map<std::string, WinningRule>& rule_registry() {
    static std::map<std::string, WinningRule> registry;
    return registry;
}

inline void register_rule(const WinningRule& rule) { rule_registry()[rule.id] = rule; }

inline WinningRule find_rule(const std::string& id) {
    if (id == "uniform_active") return builtin_rule(BuiltinRule::uniform_active);
    if (id == "highest_card") return builtin_rule(BuiltinRule::highest_card);
    auto it = rule_registry().find(id);
    if (it == rule_registry().end())
        throw std::invalid_argument("find_rule: unknown rule id '" + id + "'");
    return it->second;
}

// Card-level game state: m unordered hands partitioning the deck multiset.
struct PwarState {
    std::vector<std::vector<Rank>> hands;
    long long t = 0;

    std::size_t nonempty_count() const {
        std::size_t k = 0;
        for (const auto& h : hands)
            if (!h.empty()) ++k;
        return k;
    }

    std::vector<int> hand_sizes() const {
        std::vector<int> sizes;
        sizes.reserve(hands.size());
        for (const auto& h : hands) sizes.push_back(static_cast<int>(h.size()));
        return sizes;
    }
};

inline std::vector<Rank> default_deck(int n) {
    std::vector<Rank> deck(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) deck[static_cast<std::size_t>(i)] = i + 1;
    return deck;
}

// Uniform deal of fixed hand sizes: one Fisher-Yates pass, then cut.
inline PwarState uniform_deal(const std::vector<Rank>& deck, const Composition& sizes,
                              RandomSource& rng) {
    if (static_cast<long long>(deck.size()) != sizes.total())
        throw std::invalid_argument("uniform_deal: deck size does not match hand sizes");
    std::vector<Rank> shuffled = deck;
    rng.shuffle(shuffled);
    PwarState state;
    state.hands.resize(sizes.players());
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < sizes.players(); ++i) {
        const auto count = static_cast<std::size_t>(sizes[i]);
        state.hands[i].assign(shuffled.begin() + static_cast<long>(cursor),
                              shuffled.begin() + static_cast<long>(cursor + count));
        cursor += count;
    }
    return state;
}

struct PwarStepResult {
    PwarState next;
    std::size_t winner = 0;
};

inline PwarStepResult pwar_step(const PwarState& state, const WinningRule& rule,
                                RandomSource& rng) {
    if (state.nonempty_count() < 2)
        throw std::logic_error("pwar_step: fewer than 2 nonempty hands");

    PwarState next = state;
    const std::size_t m = next.hands.size();
    std::vector<PlayedCard> played(m);
    for (std::size_t i = 0; i < m; ++i) {
        auto& hand = next.hands[i];
        if (hand.empty()) continue;
        const auto pick = static_cast<std::size_t>(rng.uniform_below(hand.size()));
        played[i] = hand[pick];
        hand[pick] = hand.back();
        hand.pop_back();
    }

    // Hands now hold the remaining cards S_i, exactly what the rule sees.
    const std::vector<double> probs = rule.evaluate(played, next.hands);
    const std::size_t winner = sample_winner(probs, rng.next_double());

    auto& pile = next.hands[winner];
    for (const auto& card : played)
        if (card) pile.push_back(*card);
    next.t = state.t + 1;
    return {std::move(next), winner};
}

// ---------------------------------------------------------------------------
// Rule validation (the winning-rule axioms, checked on sampled inputs).

struct RuleViolation {
    std::string axiom;    // "simplex", "phi_zero", "equivariance", "symmetry"
    std::string witness;  // human-readable configuration dump
};

struct ValidationReport {
    long long samples_checked = 0;
    std::vector<RuleViolation> violations;
    bool ok() const { return violations.empty(); }
};

namespace detail {

inline std::string describe_config(std::span<const PlayedCard> played,
                                   std::span<const std::vector<Rank>> remaining) {
    std::ostringstream os;
    os << "played=(";
    for (std::size_t i = 0; i < played.size(); ++i) {
        if (i) os << ",";
        if (played[i])
            os << *played[i];
        else
            os << "phi";
    }
    os << ") remaining_sizes=(";
    for (std::size_t i = 0; i < remaining.size(); ++i) {
        if (i) os << ",";
        os << remaining[i].size();
    }
    os << ")";
    return os.str();
}

inline std::vector<std::vector<std::size_t>> permutations_of(std::size_t m) {
    std::vector<std::size_t> identity(m);
    for (std::size_t i = 0; i < m; ++i) identity[i] = i;
    std::vector<std::vector<std::size_t>> all;
    do {
        all.push_back(identity);
    } while (std::next_permutation(identity.begin(), identity.end()));
    return all;
}

}  // namespace detail

// Draws `samples` random legal (played, remaining) configurations of a deck
// of n cards dealt to m players and checks every axiom on each; violations
// are reported with a witness, never thrown. Permutations are enumerated
// exhaustively for m <= 4, sampled otherwise.
inline ValidationReport validate_rule(const WinningRule& rule, int n, int m, long long samples,
                                      RandomSource& rng) {
    if (samples < 1) throw std::invalid_argument("validate_rule: samples must be >= 1");
    if (n < 1 || m < 2) throw std::invalid_argument("validate_rule: need n >= 1, m >= 2");

    ValidationReport report;
    const double tol = 1e-12;
    const bool exhaustive_perms = m <= 4;
    const auto all_perms =
        exhaustive_perms ? detail::permutations_of(static_cast<std::size_t>(m))
                         : std::vector<std::vector<std::size_t>>{};

    for (long long sample = 0; sample < samples; ++sample) {
        // Random legal configuration: deal each card to a uniform player
        // (hands may be empty), then draw one played card per nonempty hand.
        std::vector<std::vector<Rank>> hands(static_cast<std::size_t>(m));
        for (int card = 1; card <= n; ++card)
            hands[rng.uniform_below(static_cast<std::uint64_t>(m))].push_back(card);
        std::vector<PlayedCard> played(static_cast<std::size_t>(m));
        for (auto i = 0u; i < hands.size(); ++i) {
            if (hands[i].empty()) continue;
            const auto pick = static_cast<std::size_t>(rng.uniform_below(hands[i].size()));
            played[i] = hands[i][pick];
            hands[i][pick] = hands[i].back();
            hands[i].pop_back();
        }

        const auto record = [&](const char* axiom) {
            report.violations.push_back({axiom, detail::describe_config(played, hands)});
        };
        // A rule that throws or returns the wrong arity on a legal input
        // breaks its contract; report it instead of propagating.
        const auto safe_eval = [&](std::span<const PlayedCard> a,
                                   std::span<const std::vector<Rank>> s)
            -> std::optional<std::vector<double>> {
            try {
                auto out = rule.evaluate(a, s);
                if (out.size() != static_cast<std::size_t>(m)) return std::nullopt;
                return out;
            } catch (const std::exception&) {
                return std::nullopt;
            }
        };

        const auto evaluated = safe_eval(played, hands);
        if (!evaluated) {
            record("evaluation");
            ++report.samples_checked;
            continue;
        }
        const std::vector<double>& p = *evaluated;
        double total = 0.0;
        bool nonneg = true;
        for (double v : p) {
            if (v < 0.0) nonneg = false;
            total += v;
        }
        if (!nonneg || std::abs(total - 1.0) > kProbabilitySumTolerance) record("simplex");

        for (std::size_t i = 0; i < p.size(); ++i)
            if (!played[i] && hands[i].empty() && p[i] != 0.0) record("phi_zero");

        // Equivariance and (for flagged rules) symmetry under permutations.
        std::vector<std::vector<std::size_t>> perms;
        if (exhaustive_perms) {
            perms = all_perms;
        } else {
            std::vector<std::size_t> sigma(static_cast<std::size_t>(m));
            for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = i;
            for (int rep = 0; rep < 8; ++rep) {
                for (std::size_t i = sigma.size(); i > 1; --i)
                    std::swap(sigma[i - 1], sigma[rng.uniform_below(i)]);
                perms.push_back(sigma);
            }
        }

        std::vector<PlayedCard> played_perm(static_cast<std::size_t>(m));
        std::vector<std::vector<Rank>> hands_perm(static_cast<std::size_t>(m));
        for (const auto& sigma : perms) {
            for (std::size_t i = 0; i < sigma.size(); ++i) {
                played_perm[i] = played[sigma[i]];
                hands_perm[i] = hands[sigma[i]];
            }
            const auto q = safe_eval(played_perm, hands_perm);
            bool equivariant = q.has_value();
            if (equivariant)
                for (std::size_t i = 0; i < sigma.size(); ++i)
                    if (std::abs((*q)[i] - p[sigma[i]]) > tol) equivariant = false;
            if (!equivariant) {
                record("equivariance");
                break;
            }
        }

        if (rule.symmetric) {
            for (const auto& sigma : perms) {
                for (std::size_t i = 0; i < sigma.size(); ++i)
                    hands_perm[i] = hands[sigma[i]];
                const auto q = safe_eval(played, hands_perm);
                bool unchanged = q.has_value();
                if (unchanged)
                    for (std::size_t i = 0; i < q->size(); ++i)
                        if (std::abs((*q)[i] - p[i]) > tol) unchanged = false;
                if (!unchanged) {
                    record("symmetry");
                    break;
                }
            }
        }
        ++report.samples_checked;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Full games and the sticky-walk equivalence probe.

inline RunResult run_pwar(const RunConfig& config, const WinningRule& rule) {
    if (config.variant != Variant::pwar)
        throw std::invalid_argument("run_pwar: config variant must be pwar");
    config.validate();
    const Composition sizes = config.start_composition();
    const std::vector<Rank> deck = default_deck(config.n);
    const long long cap = config.effective_round_cap();

    return run_replications(
        config.replications, config.seed, config.threads, config.histogram_bin_width,
        [&](long long, RandomSource& rng) {
            PwarState state = uniform_deal(deck, sizes, rng);
            RepOutcome out;
            while (state.nonempty_count() > 1) {
                if (out.rounds >= cap) {
                    out.censored = true;
                    return out;
                }
                state = pwar_step(state, rule, rng).next;
                ++out.rounds;
            }
            return out;
        });
}

struct ComparisonReport {
    long long replications = 0;
    std::size_t active_players = 0;
    std::vector<long long> winner_counts;
    double tv_distance = 0.0;   // against uniform on the active players
    double chi_square = 0.0;    // over active players, expected reps/|C|
    long long update_mismatches = 0;  // size updates differing from the walk law
};

// Simulates single rounds from fresh uniform deals and compares the winner
// distribution with the uniform-on-active-players law; also checks that the
// hand-size update matches the sticky-walk update exactly, given the winner.
inline ComparisonReport equivalence_check(const Composition& sizes, const WinningRule& rule,
                                          long long reps, RandomSource& rng) {
    if (reps < 1000) throw std::invalid_argument("equivalence_check: need reps >= 1000");
    const auto support = sizes.support();
    const std::size_t k = support.size();
    if (k < 2) throw std::invalid_argument("equivalence_check: start must have >= 2 active players");
    const std::vector<Rank> deck = default_deck(static_cast<int>(sizes.total()));

    ComparisonReport report;
    report.replications = reps;
    report.active_players = k;
    report.winner_counts.assign(sizes.players(), 0);

    for (long long rep = 0; rep < reps; ++rep) {
        PwarState state = uniform_deal(deck, sizes, rng);
        const auto [next, winner] = pwar_step(state, rule, rng);
        ++report.winner_counts[winner];

        for (std::size_t i = 0; i < sizes.players(); ++i) {
            const int before = sizes[i];
            const int after = static_cast<int>(next.hands[i].size());
            int expected = before;
            if (before > 0) expected += (i == winner) ? static_cast<int>(k) - 1 : -1;
            if (after != expected) {
                ++report.update_mismatches;
                break;
            }
        }
    }

    const double uniform = 1.0 / static_cast<double>(k);
    const double expected_count = static_cast<double>(reps) * uniform;
    double tv = 0.0;
    for (std::size_t i = 0; i < sizes.players(); ++i) {
        const double freq =
            static_cast<double>(report.winner_counts[i]) / static_cast<double>(reps);
        const double target = sizes[i] > 0 ? uniform : 0.0;
        tv += std::abs(freq - target);
        if (sizes[i] > 0) {
            const double diff = static_cast<double>(report.winner_counts[i]) - expected_count;
            report.chi_square += diff * diff / expected_count;
        }
    }
    report.tv_distance = 0.5 * tv;
    return report;
}

}  // namespace warsim
