#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "warsim/composition.hpp"

namespace warsim {

enum class Variant { sticky_walk, pwar, fwar, standard_war };

inline std::string to_string(Variant v) {
    switch (v) {
        case Variant::sticky_walk: return "sticky_walk";
        case Variant::pwar: return "pwar";
        case Variant::fwar: return "fwar";
        case Variant::standard_war: return "standard_war";
    }
    return "unknown";
}

enum class DealMode { equal_split, claim };

// One experiment. Default round cap is 100*n^2, far beyond the n^2/2 upper
// bound on the expected termination time, so censoring is an exceptional
// event rather than an error.
struct RunConfig {
    Variant variant = Variant::sticky_walk;
    int n = 0;                                // deck size (52 for standard war)
    int m = 2;                                // players
    std::optional<std::vector<int>> initial_sizes;  // empty => equal split
    std::string rule_id = "uniform_active";   // pwar
    std::string strength_id = "affine";       // fwar
    DealMode deal = DealMode::claim;          // fwar deal mode
    long long replications = 1000;
    std::uint64_t seed = 0;
    long long round_cap = 0;                  // 0 => default_round_cap()
    int threads = 1;
    long long histogram_bin_width = 50;
    bool allow_uneven_deal = true;            // standard war, 52 mod m != 0

    long long default_round_cap() const {
        const long long nn = variant == Variant::standard_war ? 52 : n;
        return 100 * nn * nn;
    }

    long long effective_round_cap() const {
        return round_cap > 0 ? round_cap : default_round_cap();
    }

    Composition start_composition() const {
        if (initial_sizes) return Composition(*initial_sizes);
        return Composition::equal_split(n, m);
    }

    void validate() const {
        if (replications < 1) throw std::invalid_argument("config: replications must be >= 1");
        if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
        if (round_cap < 0) throw std::invalid_argument("config: round_cap must be >= 1");
        if (variant == Variant::standard_war) {
            if (m < 2 || m > 52) throw std::invalid_argument("config: players must be in [2, 52]");
            return;
        }
        if (n < 1) throw std::invalid_argument("config: n must be >= 1");
        if (m < 2) throw std::invalid_argument("config: m must be >= 2");
        if (initial_sizes) {
            Composition c(*initial_sizes);
            if (static_cast<int>(c.players()) != m)
                throw std::invalid_argument("config: initial_sizes length must equal m");
            if (c.total() != n)
                throw std::invalid_argument("config: initial_sizes must sum to n");
        } else if (variant != Variant::fwar || deal == DealMode::equal_split) {
            if (n % m != 0)
                throw std::invalid_argument("config: equal deal requires m | n");
        }
    }
};

}  // namespace warsim
