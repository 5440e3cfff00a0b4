// Seeded, splittable random source for reproducible Monte Carlo.
//
// Every replication owns one RandomSource derived from (seed, stream_index).
// The same pair always yields the same draw sequence, independent of thread
// count or scheduling, so parallel runs are bit-reproducible. Streams with
// distinct indices are decorrelated by hashing the index through the
// splitmix64 finalizer before seeding a xoshiro256** state.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace warsim {

namespace detail {

// splitmix64 finalizer (Vigna). Used as the seed expander / index hash.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// xoshiro256** generator, one instance per replication stream.
class RandomSource {
public:
    using result_type = std::uint64_t;

    RandomSource() : RandomSource(0, 0) {}

    RandomSource(std::uint64_t seed, std::uint64_t stream_index)
        : seed_(seed), stream_index_(stream_index) {
        // Mix seed and stream index so that nearby indices land far apart.
        std::uint64_t sm = seed;
        std::uint64_t a = detail::splitmix64(sm);
        sm = stream_index ^ 0xa3ec647659359acdULL;
        std::uint64_t b = detail::splitmix64(sm);
        sm = a ^ detail::rotl64(b, 17);
        for (auto& word : state_) word = detail::splitmix64(sm);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = detail::rotl64(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl64(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, bound) via Lemire's multiply-high method.
    std::uint64_t uniform_below(std::uint64_t bound) {
        std::uint64_t x = next_u64();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<unsigned __int128>(x) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Fisher-Yates shuffle. Self-contained so results do not depend on the
    // standard library's std::shuffle implementation.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

    // URBG interface so the source plugs into <random> utilities if needed.
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next_u64(); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::uint64_t state_[4];
};

inline RandomSource derive_stream(std::uint64_t seed, std::uint64_t replication_index) {
    return RandomSource(seed, replication_index);
}

// Tolerance on probability-vector sums; rules are evaluated in floating
// point, so exact sums cannot be required.
inline constexpr double kProbabilitySumTolerance = 1e-9;

// Picks the winner index for u in (x_{i-1}, x_i], where x_i are the partial
// sums of `probabilities`. u = 0 maps to the first index with positive
// probability. Throws std::invalid_argument on malformed vectors.
inline std::size_t sample_winner(std::span<const double> probabilities, double u) {
    if (probabilities.empty()) throw std::invalid_argument("sample_winner: empty probability vector");
    double total = 0.0;
    for (double p : probabilities) {
        if (p < 0.0 || !std::isfinite(p))
            throw std::invalid_argument("sample_winner: negative or non-finite probability");
        total += p;
    }
    if (std::abs(total - 1.0) > kProbabilitySumTolerance)
        throw std::invalid_argument("sample_winner: probabilities do not sum to 1");

    double cumulative = 0.0;
    std::size_t last_positive = probabilities.size();
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (probabilities[i] <= 0.0) continue;
        cumulative += probabilities[i];
        last_positive = i;
        if (u <= cumulative) return i;
    }
    // u slipped past the accumulated total by rounding; charge the last
    // positive entry, which owns the interval ending at 1.
    if (last_positive == probabilities.size())
        throw std::invalid_argument("sample_winner: all probabilities are zero");
    return last_positive;
}

inline std::size_t sample_winner(const std::vector<double>& probabilities, double u) {
    return sample_winner(std::span<const double>(probabilities), u);
}

}  // namespace warsim
