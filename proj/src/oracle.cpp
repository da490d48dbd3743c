#include "carbonsched/oracle.hpp"

#include "carbonsched/error.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>

namespace carbonsched {

namespace {

double naive_grams(std::span<const double> profile, std::span<const double> intensities,
                   std::span<const std::size_t> indices)
{
    double total = 0.0;
    for (std::size_t j = 0; j < indices.size(); ++j) {
        total += profile[j] * intensities[indices[j]];
    }
    return total;
}

// Next larger integer with the same popcount.
std::uint32_t next_combination(std::uint32_t v)
{
    const std::uint32_t t = v | (v - 1);
    return (t + 1) | (((~t & -~t) - 1) >> (__builtin_ctz(v) + 1));
}

std::vector<std::size_t> exhaustive_best(std::span<const double> profile, std::span<const double> intensities,
                                         std::size_t start, std::size_t window)
{
    const std::size_t n = profile.size();
    const std::uint32_t limit = window == 32 ? 0 : (std::uint32_t{1} << window);
    std::uint32_t mask = (n == 32) ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1);

    std::vector<std::size_t> best;
    double best_grams = 0.0;
    std::vector<std::size_t> idx(n);
    while (mask < limit) {
        std::size_t j = 0;
        for (std::uint32_t m = mask, bit = 0; m != 0; ++bit, m >>= 1) {
            if (m & 1U) {
                idx[j++] = start + bit;
            }
        }
        const double grams = naive_grams(profile, intensities, idx);
        if (best.empty() || grams < best_grams) {
            best = idx;
            best_grams = grams;
        }
        if (n == window) {
            break;
        }
        mask = next_combination(mask);
    }
    return best;
}

std::vector<std::size_t> sweep_best(std::span<const double> profile, std::span<const double> intensities,
                                    std::size_t start, std::size_t window)
{
    const auto span = intensities.subspan(start, window);
    const std::set<double> thresholds(span.begin(), span.end());
    std::optional<std::vector<std::size_t>> best;
    double best_grams = 0.0;
    for (double threshold : thresholds) {
        std::vector<std::size_t> idx;
        try {
            const auto outcome = threshold_schedule(profile.size(), intensities, start, window, threshold);
            idx.assign(outcome.schedule.indices().begin(), outcome.schedule.indices().end());
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Coverage) {
                throw;
            }
            continue;
        }
        const double grams = naive_grams(profile, intensities, idx);
        if (!best || grams < best_grams) {
            best = std::move(idx);
            best_grams = grams;
        }
    }
    if (!best) {
        fail_internal("threshold sweep found no feasible threshold");
    }
    return *best;
}

} // namespace

OptimizationOutcome oracle_pause_resume(std::span<const double> profile, std::span<const double> intensities,
                                        std::size_t start, std::size_t slack, OracleMode mode)
{
    const std::size_t n = profile.size();
    if (n == 0) {
        fail_validation("job profile has no intervals");
    }
    const std::size_t window = n + slack;
    if (start > intensities.size() || window > intensities.size() - start) {
        fail_coverage("window exceeds series coverage");
    }
    if (mode == OracleMode::Auto) {
        mode = window <= kMaxExhaustiveWindow ? OracleMode::ExhaustiveSubsets : OracleMode::ThresholdSweep;
    }
    if (mode == OracleMode::ExhaustiveSubsets && window > kMaxExhaustiveWindow) {
        fail_validation("window of " + std::to_string(window) + " intervals too large for exhaustive mode (max " +
                        std::to_string(kMaxExhaustiveWindow) + ")");
    }

    std::vector<std::size_t> chosen = mode == OracleMode::ExhaustiveSubsets
                                          ? exhaustive_best(profile, intensities, start, window)
                                          : sweep_best(profile, intensities, start, window);

    std::vector<std::size_t> contiguous(n);
    for (std::size_t j = 0; j < n; ++j) {
        contiguous[j] = start + j;
    }
    const double baseline = naive_grams(profile, intensities, contiguous);
    const double optimized = naive_grams(profile, intensities, chosen);
    Schedule schedule(std::move(chosen));
    const std::size_t pauses = schedule.n_pauses();

    return OptimizationOutcome{
        .baseline_grams = baseline,
        .optimized_grams = optimized,
        .savings_fraction = baseline > 0.0 ? (baseline - optimized) / baseline : 0.0,
        .schedule = std::move(schedule),
        .n_pauses = pauses,
        .pauses_per_hour = static_cast<double>(pauses) * static_cast<double>(kIntervalsPerHour) / static_cast<double>(window),
        .window_intervals = window,
        .slack_intervals = slack,
    };
}

OptimizationOutcome oracle_pause_resume(const EnergyProfile& profile, const IntensitySeries& series, Timestamp t0,
                                        const SlackBudget& slack, OracleMode mode)
{
    const std::size_t start = series.index_of(t0);
    return oracle_pause_resume(profile.kwh(), series.values(), start, slack.slack_intervals(profile.size()), mode);
}

} // namespace carbonsched
