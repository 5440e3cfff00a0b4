#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

#include "warsim/exact_solver.hpp"
#include "warsim/sticky_walk.hpp"
#include "warsim/verify.hpp"

using namespace warsim;

TEST_CASE("walk_step applies the winner/loser update") {
    // (1,1): either winner forces a permutation of (2,0)
    RandomSource rng(1, 0);
    const WalkState next = walk_step({Composition({1, 1}), 0}, rng);
    std::vector<int> sorted = next.position.sizes();
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(sorted == std::vector<int>{0, 2});
    REQUIRE(next.t == 1);
}

TEST_CASE("walk_step outcomes enumerate exactly the winner choices") {
    // (2,1,1): winner 1 -> (4,0,0); winner 2 -> (1,3,0); winner 3 -> (1,0,3)
    bool seen_400 = false, seen_130 = false, seen_103 = false;
    for (std::uint64_t stream = 0; stream < 64; ++stream) {
        RandomSource rng(7, stream);
        const WalkState next = walk_step({Composition({2, 1, 1}), 0}, rng);
        const auto& s = next.position.sizes();
        if (s == std::vector<int>{4, 0, 0}) seen_400 = true;
        else if (s == std::vector<int>{1, 3, 0}) seen_130 = true;
        else if (s == std::vector<int>{1, 0, 3}) seen_103 = true;
        else FAIL("unexpected successor " << next.position.to_string());
    }
    REQUIRE(seen_400);
    REQUIRE(seen_130);
    REQUIRE(seen_103);
}

TEST_CASE("zero coordinates stay zero") {
    // (3,0,1): support {1,3}; winner 3 -> (2,0,2)
    for (std::uint64_t stream = 0; stream < 32; ++stream) {
        RandomSource rng(9, stream);
        const WalkState next = walk_step({Composition({3, 0, 1}), 0}, rng);
        REQUIRE(next.position[1] == 0);
        const auto& s = next.position.sizes();
        REQUIRE((s == std::vector<int>{2, 0, 2} || s == std::vector<int>{4, 0, 0}));
    }
}

TEST_CASE("walk_step rejects absorbing states") {
    RandomSource rng(1, 0);
    REQUIRE_THROWS_AS(walk_step({Composition({4, 0}), 0}, rng), std::logic_error);
}

TEST_CASE("trajectories conserve total and never regrow support") {
    RandomSource rng(42, 17);
    WalkState state{Composition({5, 3, 2, 2}), 0};
    auto support_set = [](const Composition& c) { return c.support(); };
    while (!state.position.is_absorbing()) {
        const auto before = support_set(state.position);
        const WalkState next = walk_step(state, rng);
        REQUIRE(next.position.total() == state.position.total());
        for (std::size_t i : support_set(next.position))
            REQUIRE(std::find(before.begin(), before.end(), i) != before.end());
        state = next;
        REQUIRE(state.t < 10'000);
    }
}

TEST_CASE("absorption_time edge cases") {
    RandomSource rng(3, 0);
    REQUIRE(absorption_time(Composition({6, 0, 0}), rng, 1000).rounds == 0);

    for (std::uint64_t stream = 0; stream < 16; ++stream) {
        RandomSource r2(3, stream);
        const auto res = absorption_time(Composition({1, 1}), r2, 1000);
        REQUIRE(res.rounds == 1);
        REQUIRE_FALSE(res.censored);
    }
    for (std::uint64_t stream = 0; stream < 16; ++stream) {
        RandomSource r3(4, stream);
        REQUIRE(absorption_time(Composition({1, 1, 1}), r3, 1000).rounds == 1);
    }
}

TEST_CASE("absorption_time censors at the round cap") {
    RandomSource rng(5, 0);
    const auto res = absorption_time(Composition({16, 16}), rng, 3);
    REQUIRE(res.censored);
    REQUIRE(res.rounds == 3);
}

TEST_CASE("theorem_bounds closed forms") {
    const auto [lo_eq, hi_eq] = theorem_bounds(Composition::equal_split(6, 3));
    REQUIRE(lo_eq == Catch::Approx(4.0));   // n^2/m^2
    REQUIRE(hi_eq == Catch::Approx(12.0));  // n^2 (m-1) / (2m)

    const auto [lo2, hi2] = theorem_bounds(Composition({2, 2}));
    REQUIRE(lo2 == 4.0);
    REQUIRE(hi2 == 4.0);  // two players collapse the interval

    const auto [lo0, hi0] = theorem_bounds(Composition({7, 0, 0}));
    REQUIRE(lo0 == 0.0);
    REQUIRE(hi0 == 0.0);
}

TEST_CASE("three-player expectation closed form") {
    REQUIRE(three_player_expectation(2, 2, 2) == Catch::Approx(8.0));
    REQUIRE(three_player_expectation(1, 1, 1) == Catch::Approx(1.0));
    // cross-checked against the exact solve over the 15-composition space
    const double solved = exact_expected_absorption(Composition({1, 1, 2}), 1e-12).expected_time;
    REQUIRE(three_player_expectation(1, 1, 2) == Catch::Approx(3.0));
    REQUIRE(solved == Catch::Approx(3.0).margin(1e-8));
    REQUIRE_THROWS_AS(three_player_expectation(1, 1, 0), std::invalid_argument);
}

TEST_CASE("first-elimination expectation closed form") {
    REQUIRE(sandell_tau1(2, 2, 2) == Catch::Approx(2.0));
    REQUIRE(sandell_tau1(1, 1, 1) == Catch::Approx(1.0));
    // cross-checked against the first-hit-of-zero solve
    const double solved = expected_first_elimination(Composition({1, 1, 2}), 1e-12).expected_time;
    REQUIRE(solved == Catch::Approx(sandell_tau1(1, 1, 2)).margin(1e-8));
    REQUIRE(sandell_tau1(1, 1, 2) == Catch::Approx(1.0));
    REQUIRE_THROWS_AS(sandell_tau1(1, 1, 0), std::invalid_argument);
}

TEST_CASE("one-step sum-of-squares identity on the worked examples") {
    const auto c11 = martingale_step_identity(Composition({1, 1}));
    REQUIRE(c11.expected_next_sum_sq == 4.0);
    REQUIRE(c11.predicted == 4.0);

    const auto c211 = martingale_step_identity(Composition({2, 1, 1}));
    REQUIRE(c211.expected_next_sum_sq == 12.0);
    REQUIRE(c211.predicted == 12.0);

    const auto c31 = martingale_step_identity(Composition({3, 1}));
    REQUIRE(c31.expected_next_sum_sq == 12.0);
    REQUIRE(c31.predicted == 12.0);
}

TEST_CASE("one-step identity holds exhaustively at small sizes") {
    const CheckResult result = check_walk_martingale_identity(10, 4);
    INFO(result.detail);
    REQUIRE(result.pass);
}

TEST_CASE("expected absorption respects permutation symmetry") {
    SolverOptions opts;
    opts.tolerance = 1e-12;
    AbsorptionSolver solver(9, 3, AbsorbMode::single_survivor, opts);
    std::vector<int> sizes = {5, 3, 1};
    std::sort(sizes.begin(), sizes.end());
    const double reference = solver.value(Composition({5, 3, 1}));
    do {
        REQUIRE(solver.value(Composition(sizes)) == Catch::Approx(reference).margin(1e-12));
    } while (std::next_permutation(sizes.begin(), sizes.end()));
}

TEST_CASE("run_walk mean is consistent with the exact value") {
    RunConfig config;
    config.variant = Variant::sticky_walk;
    config.n = 8;
    config.m = 2;
    config.replications = 10'000;
    config.seed = 20250101;
    config.threads = 2;
    const RunResult run = run_walk(config);
    REQUIRE(run.summary.censored == 0);
    const double exact = 16.0;  // product form for equal two-player hands
    REQUIRE(std::abs(run.summary.mean_rounds - exact) <= 4.0 * run.summary.std_error);
}
