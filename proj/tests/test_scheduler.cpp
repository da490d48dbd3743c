#include "carbonsched/error.hpp"
#include "carbonsched/oracle.hpp"
#include "carbonsched/scheduler.hpp"

#include "support.hpp"

#include <doctest.h>

#include <limits>

using namespace carbonsched;

namespace {

const std::vector<double> kUnit2{1.0, 1.0};
const std::vector<double> kUnit3{1.0, 1.0, 1.0};

std::vector<std::size_t> indices_of(const Schedule& s) { return {s.indices().begin(), s.indices().end()}; }

} // namespace

TEST_CASE("SlackBudget")
{
    CHECK(SlackBudget::hours(6).slack_intervals(10) == 72);
    CHECK(SlackBudget::hours(0.5).slack_intervals(10) == 6);
    CHECK(SlackBudget::fraction(0.25).slack_intervals(4) == 1);
    CHECK(SlackBudget::fraction(0.25).slack_intervals(5) == 2); // ceil(1.25)
    CHECK(SlackBudget::fraction(0.1).slack_intervals(30) == 3);
    CHECK(SlackBudget::fraction(1.0).slack_intervals(192) == 192);
    CHECK(SlackBudget::hours(0).slack_intervals(10) == 0);
    CHECK(SlackBudget::hours(0.1).slack_intervals(1) == 2); // 1.2 intervals rounds up
    CHECK(SlackBudget::parse("24h") == SlackBudget::hours(24));
    CHECK(SlackBudget::parse("75%") == SlackBudget::fraction(0.75));
    CHECK(SlackBudget::hours(6).label() == "6h");
    CHECK(SlackBudget::fraction(0.25).label() == "25%");
    CHECK_THROWS_AS(SlackBudget::parse("6"), Error);
    CHECK_THROWS_AS(SlackBudget::parse("-6h"), Error);
    CHECK_THROWS_AS(SlackBudget::parse("6d"), Error);
    CHECK_THROWS_AS(SlackBudget::hours(-1).validate(), Error);
}

TEST_CASE("Schedule")
{
    const Schedule s({0, 2, 3, 7});
    CHECK(s.n_pauses() == 2);
    CHECK_FALSE(s.is_contiguous());
    CHECK(Schedule::contiguous(4, 3).is_contiguous());
    CHECK(Schedule::contiguous(4, 3).n_pauses() == 0);
    CHECK_THROWS_AS(Schedule({2, 2}), Error);
    CHECK_THROWS_AS(Schedule({3, 1}), Error);
    CHECK_THROWS_AS(Schedule(std::vector<std::size_t>{}), Error);
}

TEST_CASE("flexible_start examples")
{
    SUBCASE("best start in the middle")
    {
        // Starts 0, 1, 2 cost 400, 200, 400 g.
        const std::vector<double> grid{300, 100, 100, 300};
        const auto out = flexible_start(kUnit2, grid, 0, 2);
        CHECK(out.schedule.front() == 1);
        CHECK(out.optimized_grams == 200.0);
        CHECK(out.baseline_grams == 400.0);
        CHECK(out.savings_fraction == 0.5);
        CHECK(out.n_pauses == 0);
        CHECK(out.schedule.is_contiguous());
    }
    SUBCASE("flat grid")
    {
        const std::vector<double> grid(30, 250.0);
        const auto out = flexible_start(kUnit3, grid, 4, 20);
        CHECK(out.savings_fraction == 0.0);
        CHECK(out.schedule.front() == 4);
    }
    SUBCASE("zero window")
    {
        const std::vector<double> grid{300, 100, 100, 300};
        const auto out = flexible_start(kUnit2, grid, 0, 0);
        CHECK(out.schedule == Schedule::contiguous(0, 2));
        CHECK(out.savings_fraction == 0.0);
    }
    SUBCASE("starts past the series are skipped")
    {
        const std::vector<double> grid{300, 200, 100};
        const auto out = flexible_start(kUnit2, grid, 0, 10);
        CHECK(out.schedule.front() == 1);
        CHECK_THROWS_WITH_AS(flexible_start(kUnit2, grid, 2, 3), doctest::Contains("no feasible start"), Error);
    }
}

TEST_CASE("pause_resume examples")
{
    const std::vector<double> grid{100, 300, 100, 300, 100};
    SUBCASE("skips the expensive intervals")
    {
        const auto out = pause_resume(kUnit3, grid, 0, 2);
        CHECK(indices_of(out.schedule) == std::vector<std::size_t>{0, 2, 4});
        CHECK(out.optimized_grams == 300.0);
        CHECK(out.baseline_grams == 500.0);
        CHECK(out.savings_fraction == doctest::Approx(0.4).epsilon(1e-15));
        CHECK(out.n_pauses == 2);
        CHECK(out.window_intervals == 5);
        // 2 pauses over a 25-minute window.
        CHECK(out.pauses_per_hour == doctest::Approx(4.8).epsilon(1e-15));
        CHECK(pause_resume(kUnit3, grid, 0, 2, PausesDenominator::JobDuration).pauses_per_hour ==
              doctest::Approx(8.0));
    }
    SUBCASE("flat grid keeps the earliest contiguous run")
    {
        const std::vector<double> flat(10, 70.0);
        const auto out = pause_resume(kUnit3, flat, 2, 5);
        CHECK(out.schedule == Schedule::contiguous(2, 3));
        CHECK(out.savings_fraction == 0.0);
        CHECK(out.n_pauses == 0);
    }
    SUBCASE("no slack means the baseline run")
    {
        const auto out = pause_resume(kUnit3, grid, 1, 0);
        CHECK(out.schedule == Schedule::contiguous(1, 3));
        CHECK(out.optimized_grams == out.baseline_grams);
    }
    SUBCASE("window past the end")
    {
        CHECK_THROWS_WITH_AS(pause_resume(kUnit3, grid, 0, 3), doctest::Contains("coverage"), Error);
    }
}

TEST_CASE("threshold_schedule")
{
    const std::vector<double> grid{100, 300, 100, 300, 100};
    const auto out = threshold_schedule(3, grid, 0, 5, 200.0);
    CHECK(indices_of(out.schedule) == std::vector<std::size_t>{0, 2, 4});
    CHECK(out.schedule == pause_resume(kUnit3, grid, 0, 2).schedule);
    CHECK(out.slack_used == 2);

    const auto always = threshold_schedule(3, grid, 0, 5, std::numeric_limits<double>::infinity());
    CHECK(always.schedule == Schedule::contiguous(0, 3));
    CHECK(always.slack_used == 0);

    CHECK_THROWS_WITH_AS(threshold_schedule(3, grid, 0, 5, 50.0), doctest::Contains("threshold infeasible in window"),
                         Error);

    // Ties at the threshold are used left to right only as needed.
    const std::vector<double> ties{200, 100, 200, 200, 100};
    CHECK(indices_of(threshold_schedule(3, ties, 0, 5, 200.0).schedule) == std::vector<std::size_t>{0, 1, 4});
    CHECK(indices_of(threshold_schedule(2, ties, 0, 5, 200.0).schedule) == std::vector<std::size_t>{1, 4});
}

TEST_CASE("series-level wrappers")
{
    const IntensitySeries series("r", make_timestamp(2020, 1, 1), {100, 300, 100, 300, 100, 100});
    const EnergyProfile profile(kUnit3);
    const auto pr = pause_resume(profile, series, series.epoch_start(), SlackBudget::intervals(2));
    CHECK(pr.optimized_grams == 300.0);
    const auto fs = flexible_start(profile, series, series.time_at(1), SlackBudget::fraction(1.0));
    CHECK(fs.schedule.front() == 2); // 500 g at starts 2 and 3; earliest wins
    CHECK_THROWS_AS(pause_resume(profile, series, series.time_at(2), SlackBudget::hours(1)), Error);
    CHECK_THROWS_AS(flexible_start(profile, series, series.time_at(9), SlackBudget::hours(1)), Error);
    const auto th = threshold_schedule(profile, series, series.epoch_start(), 6, 200.0);
    CHECK(th.schedule == pr.schedule);
}

TEST_CASE("optimizer properties on random instances")
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = test::uniform_size(rng, 1, 30);
        const std::size_t slack = test::uniform_size(rng, 0, 40);
        const std::size_t start = test::uniform_size(rng, 0, 10);
        const auto grid = test::random_intensities(rng, start + n + slack + test::uniform_size(rng, 0, 5));
        const auto profile = test::uniform_profile(rng, n);

        const auto fs = flexible_start(profile, grid, start, slack);
        const auto pr = pause_resume(profile, grid, start, slack);

        // Flexible Start is one of the schedules Pause and Resume may pick.
        CHECK(fs.savings_fraction <= pr.savings_fraction);
        CHECK(fs.baseline_grams == pr.baseline_grams);
        CHECK(pr.optimized_grams <= pr.baseline_grams);
        CHECK(pr.savings_fraction >= 0.0);
        CHECK(pr.savings_fraction <= 1.0);
        CHECK(pr.schedule.size() == n);
        CHECK(pr.schedule.front() >= start);
        CHECK(pr.schedule.back() < start + n + slack);
        CHECK(pr.n_pauses == pr.schedule.n_pauses());

        const auto reference = test::enumerate_starts(profile, grid, start, slack);
        CHECK(fs.optimized_grams == reference.grams);
        CHECK(fs.schedule.front() == reference.start);

        // Scaling the grid leaves the choice alone and scales the grams.
        for (const double c : {0.5, 3.0}) {
            std::vector<double> scaled(grid);
            for (auto& v : scaled) {
                v *= c;
            }
            const auto pr_scaled = pause_resume(profile, scaled, start, slack);
            const auto fs_scaled = flexible_start(profile, scaled, start, slack);
            CHECK(pr_scaled.schedule == pr.schedule);
            CHECK(fs_scaled.schedule == fs.schedule);
            CHECK(pr_scaled.optimized_grams == c * pr.optimized_grams);
            CHECK(fs_scaled.baseline_grams == c * fs.baseline_grams);
        }
    }
}

TEST_CASE("savings grow with slack")
{
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = test::uniform_size(rng, 1, 50);
        const auto grid = test::random_intensities(rng, n + 60);
        const auto profile = test::uniform_profile(rng, n);
        double fs_prev = 0.0;
        double pr_prev = 0.0;
        for (std::size_t slack = 0; slack <= 60; slack += 3) {
            const double fs = flexible_start(profile, grid, 0, slack).savings_fraction;
            const double pr = pause_resume(profile, grid, 0, slack).savings_fraction;
            CHECK(fs >= fs_prev);
            CHECK(pr >= pr_prev);
            fs_prev = fs;
            pr_prev = pr;
        }
    }
}

TEST_CASE("multi-window flexible_start matches single windows")
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = test::uniform_size(rng, 1, 20);
        const auto grid = test::random_intensities(rng, n + 50);
        const auto profile = test::uniform_profile(rng, n);
        const std::vector<std::size_t> slacks{0, 7, 3, 50, 12};
        const auto all = flexible_start(profile, grid, 0, slacks);
        for (std::size_t k = 0; k < slacks.size(); ++k) {
            const auto one = flexible_start(profile, grid, 0, slacks[k]);
            CHECK(all[k].schedule == one.schedule);
            CHECK(all[k].optimized_grams == one.optimized_grams);
            CHECK(all[k].window_intervals == n + slacks[k]);
        }
    }
}

TEST_CASE("duality with the threshold formulation")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = test::uniform_size(rng, 1, 25);
        const std::size_t slack = test::uniform_size(rng, 0, 25);
        const auto grid = trial % 2 == 0 ? test::distinct_intensities(rng, n + slack)
                                         : test::random_intensities(rng, n + slack, 20);
        const auto profile = test::uniform_profile(rng, n);
        const auto pr = pause_resume(profile, grid, 0, slack);
        // The most expensive interval P&R chose is the threshold.
        double threshold = 0.0;
        for (const auto k : pr.schedule.indices()) {
            threshold = std::max(threshold, grid[k]);
        }
        CHECK(threshold_schedule(n, grid, 0, n + slack, threshold).schedule == pr.schedule);
    }
}

TEST_CASE("chronological assignment can lose to Flexible Start for non-uniform profiles")
{
    // All energy in the first segment. The two cheapest intervals are 0 and 1,
    // so P&R puts the heavy segment on interval 0 (10 g/kWh); starting at 1
    // puts it on interval 1 (1 g/kWh).
    const std::vector<double> profile{1.0, 0.0};
    const std::vector<double> grid{10, 1, 100};
    const auto fs = flexible_start(profile, grid, 0, 1);
    const auto pr = pause_resume(profile, grid, 0, 1);
    CHECK(fs.optimized_grams == 1.0);
    CHECK(pr.optimized_grams == 10.0);
    CHECK(fs.savings_fraction > pr.savings_fraction);

    // And it can be worse than not shifting at all.
    const std::vector<double> light_first{0.0, 1.0};
    const std::vector<double> grid2{3, 1, 2};
    const auto worse = pause_resume(light_first, grid2, 0, 1);
    CHECK(worse.optimized_grams == 2.0);
    CHECK(worse.baseline_grams == 1.0);
    CHECK(worse.savings_fraction < 0.0);
}

TEST_CASE("forecast_clamped")
{
    SyntheticGridSpec spec;
    spec.base = 400;
    spec.amplitude = 200;
    spec.noise_stddev = 30;
    spec.seed = 4;
    spec.days = 5;
    const auto series = generate_synthetic(spec);
    const EnergyProfile short_job(std::vector<double>(12, 0.5));
    const Timestamp t0 = series.epoch_start();

    const auto clamped =
        forecast_clamped(Algorithm::FlexibleStart, short_job, series, t0, SlackBudget::hours(48), 24.0);
    const auto direct = flexible_start(short_job, series, t0, SlackBudget::hours(24));
    CHECK(clamped.schedule == direct.schedule);
    CHECK(clamped.optimized_grams == direct.optimized_grams);
    CHECK(clamped.forecast_limited);

    const auto unclamped = forecast_clamped(Algorithm::FlexibleStart, short_job, series, t0, SlackBudget::hours(6), 24.0);
    CHECK(unclamped.schedule == flexible_start(short_job, series, t0, SlackBudget::hours(6)).schedule);
    CHECK_FALSE(unclamped.forecast_limited);

    // 16 h job, 100 % slack asks for a 32 h window; the forecast sees 24 h.
    const EnergyProfile long_job(std::vector<double>(16 * 12, 1.0));
    const auto pr = forecast_clamped(Algorithm::PauseResume, long_job, series, t0, SlackBudget::fraction(1.0), 24.0);
    CHECK(pr.window_intervals == 24 * 12);
    CHECK(pr.slack_intervals == 8 * 12);
    CHECK(pr.forecast_limited);
    CHECK(pr.schedule == pause_resume(long_job, series, t0, SlackBudget::hours(8)).schedule);

    CHECK_THROWS_AS(forecast_clamped(Algorithm::PauseResume, long_job, series, t0, SlackBudget::hours(1), 0.0), Error);
}
