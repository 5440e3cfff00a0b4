#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

#include "warsim/fwar.hpp"
#include "warsim/verify.hpp"

using namespace warsim;

namespace {

FwarState state_from(std::vector<std::vector<Rank>> hands, const StrengthFunction& f) {
    std::vector<std::deque<Rank>> queues(hands.size());
    for (std::size_t i = 0; i < hands.size(); ++i)
        queues[i].assign(hands[i].begin(), hands[i].end());
    return make_fwar_state(std::move(queues), f);
}

}  // namespace

TEST_CASE("win probabilities follow the strength ratios") {
    const StrengthFunction f = strength_function("affine", 2);
    const FwarState state = state_from({{1}, {2}}, f);
    const auto p = fwar_win_probabilities(state, f);
    REQUIRE(p[0] == Catch::Approx(3.0 / 7.0));
    REQUIRE(p[1] == Catch::Approx(4.0 / 7.0));
}

TEST_CASE("empty hands have zero strength and zero win probability") {
    const StrengthFunction f = strength_function("affine", 3);
    const FwarState state = state_from({{1, 3}, {}, {2}}, f);
    const auto p = fwar_win_probabilities(state, f);
    REQUIRE(p[1] == 0.0);
    REQUIRE(p[0] + p[2] == Catch::Approx(1.0));
}

TEST_CASE("winner collects every played card; Q increments match the definition") {
    const StrengthFunction f = strength_function("affine", 2);
    for (std::uint64_t stream = 0; stream < 16; ++stream) {
        RandomSource rng(41, stream);
        const FwarState state = state_from({{1}, {2}}, f);
        const FwarState next = fwar_step(state, f, rng);
        const std::size_t winner = next.hands[0].empty() ? 1 : 0;
        REQUIRE(next.hands[winner].size() == 2);
        REQUIRE(next.hands[1 - winner].empty());
        // f values 3 and 4: each increment is f(a)(total - f(a)) = 12
        REQUIRE(next.q_cross[0] == 12.0);
        REQUIRE(next.q_cross[1] == 12.0);
        REQUIRE(next.t == 1);
        // M matches recomputation from hands
        REQUIRE(next.m_strength == recompute_strengths(next, f));
    }
}

TEST_CASE("fwar_step requires two nonempty hands") {
    const StrengthFunction f = strength_function("affine", 2);
    FwarState state = state_from({{1, 2}, {}}, f);
    RandomSource rng(42, 0);
    REQUIRE_THROWS_AS(fwar_step(state, f, rng), std::logic_error);
}

TEST_CASE("one-step strength identity on the worked examples") {
    {
        const StrengthFunction f = strength_function("affine", 2);
        const auto check = martingale_step_identity_f(state_from({{1}, {2}}, f), f);
        REQUIRE(check.expected_next == Catch::Approx(49.0));
        REQUIRE(check.predicted == Catch::Approx(49.0));
    }
    {
        const StrengthFunction f = strength_function("affine", 3);
        const auto check = martingale_step_identity_f(state_from({{1}, {2}, {3}}, f), f);
        REQUIRE(check.expected_next == Catch::Approx(check.predicted).epsilon(1e-12));
    }
    {
        // one card per player under constant strength: predicted = sum M^2 + m(m-1)
        const StrengthFunction f = strength_function("constant", 3);
        const auto check = martingale_step_identity_f(state_from({{1}, {2}, {3}}, f), f);
        REQUIRE(check.predicted == Catch::Approx(3.0 + 3.0 * 2.0));
        REQUIRE(check.expected_next == Catch::Approx(check.predicted).epsilon(1e-12));
    }
}

TEST_CASE("one-step strength identity on randomized states") {
    const CheckResult result = check_fwar_martingale_identity(500, 777);
    INFO(result.detail);
    REQUIRE(result.pass);
}

TEST_CASE("claim deal assigns cards uniformly and strength sums are deterministic") {
    const int n = 10, m = 2;
    const StrengthFunction f = strength_function("affine", n);
    const double expected_sum = (3.0 * n * n + n) / 2.0;  // 155
    RandomSource rng(55, 0);
    long long size_total = 0;
    const int deals = 10'000;
    for (int d = 0; d < deals; ++d) {
        const FwarState state = claim_deal(n, m, f, rng);
        size_total += static_cast<long long>(state.hands[0].size());
        double sum_m = 0.0;
        for (double v : state.m_strength) sum_m += v;
        REQUIRE(sum_m == expected_sum);
    }
    const double mean_size = static_cast<double>(size_total) / deals;
    const double se = std::sqrt(n * 0.25 / deals);  // binomial(n, 1/2)
    REQUIRE(std::abs(mean_size - 5.0) <= 4.0 * se);
}

TEST_CASE("claim moment formulas against exhaustive deal enumeration") {
    // All m^n equiprobable assignments of cards to players; hand order does
    // not affect the strengths, so permutations can be ignored.
    const auto enumerate = [](int n, int m) {
        const StrengthFunction f = strength_function("affine", n);
        double total_sq = 0.0;
        long long deals = 0;
        std::vector<int> owner(static_cast<std::size_t>(n), 0);
        while (true) {
            std::vector<double> strength(static_cast<std::size_t>(m), 0.0);
            for (int card = 1; card <= n; ++card)
                strength[static_cast<std::size_t>(owner[card - 1])] += f.value(card);
            double sum_sq = 0.0;
            for (double v : strength) sum_sq += v * v;
            total_sq += sum_sq;
            ++deals;
            int pos = 0;
            while (pos < n && ++owner[pos] == m) owner[pos++] = 0;
            if (pos == n) break;
        }
        return total_sq / static_cast<double>(deals);
    };

    REQUIRE(enumerate(2, 2) == Catch::Approx(claim_moments(2, 2).mean_sum_m_sq).epsilon(1e-12));
    REQUIRE(enumerate(3, 2) == Catch::Approx(claim_moments(3, 2).mean_sum_m_sq).epsilon(1e-12));
    REQUIRE(enumerate(2, 3) == Catch::Approx(claim_moments(2, 3).mean_sum_m_sq).epsilon(1e-12));
    REQUIRE(enumerate(4, 3) == Catch::Approx(claim_moments(4, 3).mean_sum_m_sq).epsilon(1e-12));

    // Explicit four-deal case: strengths 3 and 4, deals give 49, 25, 25, 49.
    REQUIRE(claim_moments(2, 2).mean_sum_m_sq == Catch::Approx(37.0));
    REQUIRE(claim_moments(2, 2).mean_sum_m == Catch::Approx(7.0));
}

TEST_CASE("degenerate single-player moments") {
    const ClaimMoments moments = claim_moments(2, 1);
    REQUIRE(moments.mean_sum_m == Catch::Approx(7.0));
    REQUIRE(moments.mean_sum_m_sq == Catch::Approx(49.0));
}

TEST_CASE("claim deal Monte Carlo matches the second-moment formula") {
    const int n = 12, m = 3;
    const StrengthFunction f = strength_function("affine", n);
    RandomSource rng(66, 0);
    const int deals = 20'000;
    double total = 0.0, total_sq = 0.0;
    for (int d = 0; d < deals; ++d) {
        const FwarState state = claim_deal(n, m, f, rng);
        double sum_sq = 0.0;
        for (double v : state.m_strength) sum_sq += v * v;
        total += sum_sq;
        total_sq += sum_sq * sum_sq;
    }
    const double mean = total / deals;
    const double variance = (total_sq - total * total / deals) / (deals - 1);
    const double se = std::sqrt(variance / deals);
    REQUIRE(std::abs(mean - claim_moments(n, m).mean_sum_m_sq) <= 4.0 * se);
}

TEST_CASE("every active player clears the single-round win-probability floor") {
    // With f(a) = a + n the floor is f(1) / (f(1) + (m-1) f(n)) >= 1/(2m-1).
    for (int m = 2; m <= 4; ++m) {
        for (int n = m; n <= 8; ++n) {
            const StrengthFunction f = strength_function("affine", n);
            const double floor_value =
                f.value(1) / (f.value(1) + (m - 1) * f.value(n));
            REQUIRE(floor_value >= 1.0 / (2.0 * m - 1.0));
            // all ordered front-card tuples of distinct ranks
            std::vector<int> tuple(static_cast<std::size_t>(m), 0);
            std::function<void(int)> rec = [&](int slot) {
                if (slot == m) {
                    double total = 0.0;
                    for (int a : tuple) total += f.value(a);
                    for (int a : tuple) {
                        const double p = f.value(a) / total;
                        REQUIRE(p >= floor_value - 1e-12);
                    }
                    return;
                }
                for (int a = 1; a <= n; ++a) {
                    if (std::find(tuple.begin(), tuple.begin() + slot, a) !=
                        tuple.begin() + slot)
                        continue;
                    tuple[static_cast<std::size_t>(slot)] = a;
                    rec(slot + 1);
                }
            };
            rec(0);
        }
    }
}

TEST_CASE("M stays consistent with hands along a full game") {
    const int n = 8, m = 3;
    const StrengthFunction f = strength_function("affine", n);
    RandomSource rng(77, 0);
    FwarState state = claim_deal(n, m, f, rng);
    std::vector<double> last_q = state.q_cross;
    while (state.nonempty_count() > 1) {
        state = fwar_step(state, f, rng);
        REQUIRE(state.m_strength == recompute_strengths(state, f));
        for (std::size_t i = 0; i < state.q_cross.size(); ++i)
            REQUIRE(state.q_cross[i] >= last_q[i]);  // Q is nondecreasing
        last_q = state.q_cross;
        REQUIRE(state.t < 100'000);
    }
    // cards still partition [n]
    std::vector<Rank> all;
    for (const auto& h : state.hands) all.insert(all.end(), h.begin(), h.end());
    std::sort(all.begin(), all.end());
    for (int i = 0; i < n; ++i) REQUIRE(all[static_cast<std::size_t>(i)] == i + 1);
}

TEST_CASE("single-card deck ends before any round is played") {
    RunConfig config;
    config.variant = Variant::fwar;
    config.n = 1;
    config.m = 2;
    config.deal = DealMode::claim;
    config.replications = 200;
    config.seed = 88;
    const RunResult run = run_fwar(config, strength_function("affine", 1));
    REQUIRE(run.summary.mean_rounds == 0.0);
    REQUIRE(run.summary.max_rounds == 0);
}

TEST_CASE("equal deal builds fixed-size ordered hands") {
    const StrengthFunction f = strength_function("affine", 6);
    RandomSource rng(99, 0);
    const FwarState state = equal_deal(6, 3, f, rng);
    for (const auto& hand : state.hands) REQUIRE(hand.size() == 2);
    REQUIRE_THROWS_AS(equal_deal(7, 3, f, rng), std::invalid_argument);
}

TEST_CASE("unknown strength ids are rejected") {
    REQUIRE_THROWS_AS(strength_function("cubic", 5), std::invalid_argument);
}
