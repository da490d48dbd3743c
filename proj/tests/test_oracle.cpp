#include "carbonsched/error.hpp"
#include "carbonsched/oracle.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace carbonsched;

TEST_CASE("oracle picks the cheapest subset")
{
    // Subsets {0,1}: 500 g, {0,2}: 410 g, {1,2}: 710 g.
    const std::vector<double> profile{3.0, 1.0};
    const std::vector<double> grid{100, 200, 110};
    for (const auto mode : {OracleMode::ExhaustiveSubsets, OracleMode::ThresholdSweep, OracleMode::Auto}) {
        const auto out = oracle_pause_resume(profile, grid, 0, 1, mode);
        CHECK(out.optimized_grams == 410.0);
        CHECK(out.schedule == Schedule({0, 2}));
        CHECK(out.baseline_grams == 500.0);
    }
    CHECK(pause_resume(profile, grid, 0, 1).optimized_grams == 410.0);
}

TEST_CASE("oracle on a flat grid")
{
    const std::vector<double> profile(4, 0.5);
    const std::vector<double> grid(12, 180.0);
    const auto out = oracle_pause_resume(profile, grid, 3, 5);
    CHECK(out.optimized_grams == out.baseline_grams);
    CHECK(out.savings_fraction == 0.0);
}

TEST_CASE("oracle input checks")
{
    const std::vector<double> profile(10, 1.0);
    const std::vector<double> grid(40, 1.0);
    CHECK_THROWS_AS(oracle_pause_resume(profile, grid, 0, 17, OracleMode::ExhaustiveSubsets), Error);
    CHECK_NOTHROW(oracle_pause_resume(profile, grid, 0, 16, OracleMode::ExhaustiveSubsets));
    CHECK_NOTHROW(oracle_pause_resume(profile, grid, 0, 30, OracleMode::ThresholdSweep));
    try {
        oracle_pause_resume(profile, grid, 5, 30);
        FAIL("expected a coverage error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Coverage);
    }
    CHECK_THROWS_AS(oracle_pause_resume(std::vector<double>{}, grid, 0, 1), Error);
}

TEST_CASE("pause_resume matches the oracle")
{
    std::mt19937_64 rng(314);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = test::uniform_size(rng, 1, 12);
        const std::size_t slack = test::uniform_size(rng, 0, kMaxExhaustiveWindow - n);
        const std::size_t start = test::uniform_size(rng, 0, 4);
        const auto grid = trial % 3 == 0 ? test::random_intensities(rng, start + n + slack, 8)
                                         : test::random_intensities(rng, start + n + slack);
        const auto profile = test::uniform_profile(rng, n);
        const auto fast = pause_resume(profile, grid, start, slack);
        const auto exhaustive = oracle_pause_resume(profile, grid, start, slack, OracleMode::ExhaustiveSubsets);
        const auto sweep = oracle_pause_resume(profile, grid, start, slack, OracleMode::ThresholdSweep);
        CHECK(fast.optimized_grams == exhaustive.optimized_grams);
        CHECK(fast.optimized_grams == sweep.optimized_grams);
        CHECK(fast.baseline_grams == exhaustive.baseline_grams);
    }
}

TEST_CASE("oracle schedules agree when intensities are distinct")
{
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = test::uniform_size(rng, 1, 10);
        const std::size_t slack = test::uniform_size(rng, 0, 14);
        const auto grid = test::distinct_intensities(rng, n + slack);
        const auto profile = test::uniform_profile(rng, n);
        const auto fast = pause_resume(profile, grid, 0, slack);
        CHECK(oracle_pause_resume(profile, grid, 0, slack, OracleMode::ExhaustiveSubsets).schedule == fast.schedule);
        CHECK(oracle_pause_resume(profile, grid, 0, slack, OracleMode::ThresholdSweep).schedule == fast.schedule);
    }
}

TEST_CASE("threshold sweep handles windows beyond the exhaustive limit")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = test::uniform_size(rng, 1, 60);
        const std::size_t slack = test::uniform_size(rng, 0, 100);
        const auto grid = test::random_intensities(rng, n + slack, 300);
        const auto profile = test::uniform_profile(rng, n);
        CHECK(oracle_pause_resume(profile, grid, 0, slack).optimized_grams ==
              pause_resume(profile, grid, 0, slack).optimized_grams);
    }
}
