#include "carbonsched/scheduler.hpp"

#include "carbonsched/error.hpp"
#include "carbonsched/sci.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

namespace carbonsched {

namespace {

double savings(double baseline, double optimized) { return baseline > 0.0 ? (baseline - optimized) / baseline : 0.0; }

void require_profile(std::span<const double> profile)
{
    if (profile.empty()) {
        fail_validation("job profile has no intervals");
    }
}

void require_window(std::span<const double> intensities, std::size_t start, std::size_t length)
{
    if (start > intensities.size() || length > intensities.size() - start) {
        fail_coverage("window exceeds series coverage: intervals [" + std::to_string(start) + ", " +
                      std::to_string(start + length) + ") requested, series has " + std::to_string(intensities.size()));
    }
}

} // namespace

void SlackBudget::validate() const
{
    if (!(value >= 0.0) || !std::isfinite(value)) {
        fail_validation("slack must be a non-negative finite number");
    }
}

std::size_t SlackBudget::slack_intervals(std::size_t job_intervals) const
{
    validate();
    const double raw = kind == Kind::AbsoluteHours ? value * static_cast<double>(kIntervalsPerHour)
                                                   : value * static_cast<double>(job_intervals);
    // Round up, but not across floating-point dust such as 0.1 * 30 = 3.0000000000000004.
    const double nearest = std::round(raw);
    if (std::abs(raw - nearest) <= 1e-9 * std::max(1.0, nearest)) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::ceil(raw));
}

std::string SlackBudget::label() const
{
    if (kind == Kind::AbsoluteHours) {
        return format_decimal(value) + "h";
    }
    return format_decimal(value * 100.0) + "%";
}

SlackBudget SlackBudget::parse(std::string_view text)
{
    if (text.size() < 2) {
        fail_validation("malformed slack '" + std::string(text) + "', expected e.g. 6h or 25%");
    }
    const char unit = text.back();
    const std::string_view number = text.substr(0, text.size() - 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), v);
    if (ec != std::errc{} || ptr != number.data() + number.size()) {
        fail_validation("malformed slack '" + std::string(text) + "'");
    }
    SlackBudget slack;
    if (unit == 'h') {
        slack = hours(v);
    } else if (unit == '%') {
        slack = fraction(v / 100.0);
    } else {
        fail_validation("malformed slack '" + std::string(text) + "', unit must be 'h' or '%'");
    }
    slack.validate();
    return slack;
}

std::vector<OptimizationOutcome> flexible_start(std::span<const double> profile, std::span<const double> intensities,
                                                std::size_t start, std::span<const std::size_t> slacks)
{
    require_profile(profile);
    const std::size_t n = profile.size();
    if (start > intensities.size() || n > intensities.size() - start) {
        fail_coverage("no feasible start: job of " + std::to_string(n) + " intervals does not fit after index " +
                      std::to_string(start));
    }
    const std::size_t widest = slacks.empty() ? 0 : *std::max_element(slacks.begin(), slacks.end());
    const std::size_t last_start = std::min(start + widest, intensities.size() - n);

    // grams[k] is the run starting at start + k.
    std::vector<double> grams(last_start - start + 1);
    for (std::size_t k = 0; k < grams.size(); ++k) {
        grams[k] = contiguous_emissions(profile, intensities, start + k);
    }
    // best_upto[k]: earliest argmin over grams[0..k].
    std::vector<std::size_t> best_upto(grams.size());
    for (std::size_t k = 1; k < grams.size(); ++k) {
        best_upto[k] = grams[k] < grams[best_upto[k - 1]] ? k : best_upto[k - 1];
    }

    const double baseline = grams.front();
    std::vector<OptimizationOutcome> outcomes;
    outcomes.reserve(slacks.size());
    for (const std::size_t slack : slacks) {
        const std::size_t best = best_upto[std::min(slack, grams.size() - 1)];
        outcomes.push_back(OptimizationOutcome{
            .baseline_grams = baseline,
            .optimized_grams = grams[best],
            .savings_fraction = savings(baseline, grams[best]),
            .schedule = Schedule::contiguous(start + best, n),
            .n_pauses = 0,
            .pauses_per_hour = 0.0,
            .window_intervals = n + slack,
            .slack_intervals = slack,
        });
    }
    return outcomes;
}

OptimizationOutcome flexible_start(std::span<const double> profile, std::span<const double> intensities,
                                   std::size_t start, std::size_t slack)
{
    const std::size_t slacks[] = {slack};
    return std::move(flexible_start(profile, intensities, start, slacks).front());
}

OptimizationOutcome pause_resume(std::span<const double> profile, std::span<const double> intensities,
                                 std::size_t start, std::size_t slack, PausesDenominator denominator)
{
    require_profile(profile);
    const std::size_t n = profile.size();
    const std::size_t window = n + slack;
    require_window(intensities, start, window);

    std::vector<std::size_t> order(window);
    std::iota(order.begin(), order.end(), start);
    const auto cheaper = [&](std::size_t a, std::size_t b) {
        return intensities[a] < intensities[b] || (intensities[a] == intensities[b] && a < b);
    };
    if (n < window) {
        std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(), cheaper);
        order.resize(n);
        std::sort(order.begin(), order.end());
    }

    Schedule schedule(std::move(order));
    const double baseline = contiguous_emissions(profile, intensities, start);
    const double optimized = operational_emissions(profile, intensities, schedule.indices());
    const std::size_t pauses = schedule.n_pauses();
    const double hours = static_cast<double>(denominator == PausesDenominator::Window ? window : n) /
                         static_cast<double>(kIntervalsPerHour);

    return OptimizationOutcome{
        .baseline_grams = baseline,
        .optimized_grams = optimized,
        .savings_fraction = savings(baseline, optimized),
        .schedule = std::move(schedule),
        .n_pauses = pauses,
        .pauses_per_hour = static_cast<double>(pauses) / hours,
        .window_intervals = window,
        .slack_intervals = slack,
    };
}

ThresholdOutcome threshold_schedule(std::size_t n_intervals, std::span<const double> intensities, std::size_t start,
                                    std::size_t window, double threshold)
{
    if (n_intervals == 0) {
        fail_validation("job profile has no intervals");
    }
    if (std::isnan(threshold)) {
        fail_validation("threshold must be a number");
    }
    require_window(intensities, start, window);
    const auto span = intensities.subspan(start, window);

    const auto below = static_cast<std::size_t>(
        std::count_if(span.begin(), span.end(), [&](double v) { return v < threshold; }));
    std::size_t ties_allowed = n_intervals > below ? n_intervals - below : 0;

    std::vector<std::size_t> active;
    active.reserve(n_intervals);
    for (std::size_t k = 0; k < window && active.size() < n_intervals; ++k) {
        const double v = span[k];
        if (v < threshold) {
            active.push_back(start + k);
        } else if (v == threshold && ties_allowed > 0) {
            active.push_back(start + k);
            --ties_allowed;
        }
    }
    if (active.size() < n_intervals) {
        fail_coverage("threshold infeasible in window: only " + std::to_string(active.size()) + " of " +
                      std::to_string(n_intervals) + " intervals at or below " + format_decimal(threshold));
    }
    const std::size_t elapsed = active.back() - start + 1;
    return ThresholdOutcome{Schedule(std::move(active)), elapsed - n_intervals};
}

OptimizationOutcome flexible_start(const EnergyProfile& profile, const IntensitySeries& series, Timestamp t0,
                                   const SlackBudget& window)
{
    const std::size_t start = series.index_of(t0);
    return flexible_start(profile.kwh(), series.values(), start, window.slack_intervals(profile.size()));
}

OptimizationOutcome pause_resume(const EnergyProfile& profile, const IntensitySeries& series, Timestamp t0,
                                 const SlackBudget& slack, PausesDenominator denominator)
{
    const std::size_t start = series.index_of(t0);
    const std::size_t s = slack.slack_intervals(profile.size());
    series.require_coverage(start, profile.size() + s);
    return pause_resume(profile.kwh(), series.values(), start, s, denominator);
}

ThresholdOutcome threshold_schedule(const EnergyProfile& profile, const IntensitySeries& series, Timestamp t0,
                                    std::size_t window_intervals, double threshold)
{
    const std::size_t start = series.index_of(t0);
    series.require_coverage(start, window_intervals);
    return threshold_schedule(profile.size(), series.values(), start, window_intervals, threshold);
}

std::string algorithm_name(Algorithm algorithm)
{
    return algorithm == Algorithm::FlexibleStart ? "flexible_start" : "pause_resume";
}

OptimizationOutcome forecast_clamped(Algorithm algorithm, const EnergyProfile& profile, const IntensitySeries& series,
                                     Timestamp t0, const SlackBudget& requested, double horizon_hours,
                                     PausesDenominator denominator)
{
    if (!(horizon_hours > 0.0) || !std::isfinite(horizon_hours)) {
        fail_validation("forecast horizon must be positive");
    }
    const std::size_t start = series.index_of(t0);
    const std::size_t n = profile.size();
    const std::size_t horizon = SlackBudget::hours(horizon_hours).slack_intervals(n);
    const std::size_t wanted = requested.slack_intervals(n);

    if (algorithm == Algorithm::FlexibleStart) {
        const std::size_t slack = std::min(wanted, horizon);
        auto outcome = flexible_start(profile.kwh(), series.values(), start, slack);
        outcome.forecast_limited = slack < wanted;
        return outcome;
    }
    const std::size_t window = std::min(n + wanted, std::max(horizon, n));
    const std::size_t slack = window - n;
    series.require_coverage(start, window);
    auto outcome = pause_resume(profile.kwh(), series.values(), start, slack, denominator);
    outcome.forecast_limited = slack < wanted;
    return outcome;
}

} // namespace carbonsched
