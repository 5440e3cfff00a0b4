// Standard War on a 52-card deck: highest face-up card takes the round's pot,
// ties are broken by war rounds (one face-down plus one face-up per layer,
// recursing on repeated ties). A tied player who cannot fund a war layer is
// immediately out and forfeits her cards to the pot. Collected pots enter the
// back of the winner's queue in uniformly random order.
#pragma once

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <vector>

#include "warsim/config.hpp"
#include "warsim/random.hpp"
#include "warsim/runner.hpp"

namespace warsim {

// Rank 2..14, aces high, suits ignored.
using Card = int;

inline constexpr int kDeckSize = 52;

inline std::vector<Card> standard_deck() {
    std::vector<Card> deck;
    deck.reserve(kDeckSize);
    for (Card rank = 2; rank <= 14; ++rank)
        for (int copy = 0; copy < 4; ++copy) deck.push_back(rank);
    return deck;
}

struct WarTable {
    std::vector<std::deque<Card>> hands;
    std::vector<Card> pot;

    std::size_t active_count() const {
        std::size_t k = 0;
        for (const auto& h : hands)
            if (!h.empty()) ++k;
        return k;
    }

    long long cards_in_play() const {
        long long total = static_cast<long long>(pot.size());
        for (const auto& h : hands) total += static_cast<long long>(h.size());
        return total;
    }
};

// Deal round-robin from a uniform shuffle; with 52 mod m != 0 the lowest
// player indices receive one extra card each.
inline WarTable deal_war_table(int m, RandomSource& rng, bool allow_uneven_deal = true) {
    if (m < 2 || m > kDeckSize)
        throw std::invalid_argument("deal_war_table: players must be in [2, 52]");
    if (!allow_uneven_deal && kDeckSize % m != 0)
        throw std::invalid_argument("deal_war_table: 52 is not divisible by player count");
    std::vector<Card> deck = standard_deck();
    rng.shuffle(deck);
    WarTable table;
    table.hands.resize(static_cast<std::size_t>(m));
    for (std::size_t c = 0; c < deck.size(); ++c)
        table.hands[c % static_cast<std::size_t>(m)].push_back(deck[c]);
    return table;
}

// Plays one full round including any wars; returns the players whose hands
// emptied this round. The pot always ends empty.
inline std::vector<std::size_t> play_round(WarTable& table, RandomSource& rng) {
    if (table.active_count() < 2) throw std::logic_error("play_round: fewer than 2 active players");

    std::vector<std::size_t> contenders;
    std::vector<std::size_t> was_active;
    std::vector<Card> faceup;
    for (std::size_t i = 0; i < table.hands.size(); ++i) {
        auto& hand = table.hands[i];
        if (hand.empty()) continue;
        was_active.push_back(i);
        contenders.push_back(i);
        faceup.push_back(hand.front());
        table.pot.push_back(hand.front());
        hand.pop_front();
    }

    std::size_t winner = table.hands.size();
    while (true) {
        const Card best = *std::max_element(faceup.begin(), faceup.end());
        std::vector<std::size_t> tied;
        for (std::size_t slot = 0; slot < contenders.size(); ++slot)
            if (faceup[slot] == best) tied.push_back(contenders[slot]);

        if (tied.size() == 1) {
            winner = tied.front();
            break;
        }

        // War layer: every tied player stakes one face-down and one face-up
        // card; those who cannot are out and forfeit what they hold.
        std::vector<std::size_t> survivors;
        std::vector<Card> next_faceup;
        for (std::size_t player : tied) {
            auto& hand = table.hands[player];
            if (hand.size() < 2) {
                while (!hand.empty()) {
                    table.pot.push_back(hand.front());
                    hand.pop_front();
                }
                continue;
            }
            table.pot.push_back(hand.front());  // face-down stake
            hand.pop_front();
            next_faceup.push_back(hand.front());
            table.pot.push_back(hand.front());
            hand.pop_front();
            survivors.push_back(player);
        }

        if (survivors.size() == 1) {
            winner = survivors.front();
            break;
        }
        if (survivors.empty()) {
            // Every war participant busted. Pot goes to a uniformly random
            // active bystander; if nobody is left standing, to one of the
            // just-eliminated participants, which ends the game.
            std::vector<std::size_t> bystanders;
            for (std::size_t i = 0; i < table.hands.size(); ++i)
                if (!table.hands[i].empty()) bystanders.push_back(i);
            if (!bystanders.empty())
                winner = bystanders[rng.uniform_below(bystanders.size())];
            else
                winner = tied[rng.uniform_below(tied.size())];
            break;
        }
        contenders = std::move(survivors);
        faceup = std::move(next_faceup);
    }

    rng.shuffle(table.pot);
    auto& stack = table.hands[winner];
    for (Card card : table.pot) stack.push_back(card);
    table.pot.clear();

    std::vector<std::size_t> eliminated;
    for (std::size_t i : was_active)
        if (table.hands[i].empty()) eliminated.push_back(i);
    return eliminated;
}

struct WarGameResult {
    long long rounds = 0;
    std::size_t winner = 0;
    bool censored = false;
};

inline WarGameResult play_game(int m, RandomSource& rng, long long round_cap,
                               bool allow_uneven_deal = true) {
    WarTable table = deal_war_table(m, rng, allow_uneven_deal);
    WarGameResult result;
    while (table.active_count() > 1) {
        if (result.rounds >= round_cap) {
            result.censored = true;
            return result;
        }
        play_round(table, rng);
        ++result.rounds;
        if (table.cards_in_play() != kDeckSize || !table.pot.empty())
            throw std::logic_error("play_game: card conservation violated");
    }
    for (std::size_t i = 0; i < table.hands.size(); ++i)
        if (!table.hands[i].empty()) result.winner = i;
    return result;
}

inline RunResult run_standard_war(const RunConfig& config) {
    if (config.variant != Variant::standard_war)
        throw std::invalid_argument("run_standard_war: config variant must be standard_war");
    config.validate();
    const long long cap = config.effective_round_cap();
    return run_replications(
        config.replications, config.seed, config.threads, config.histogram_bin_width,
        [&](long long, RandomSource& rng) {
            const WarGameResult game = play_game(config.m, rng, cap, config.allow_uneven_deal);
            return RepOutcome{game.rounds, game.censored, 0.0};
        });
}

}  // namespace warsim
