#pragma once

#include "carbonsched/grid.hpp"
#include "carbonsched/schedule.hpp"
#include "carbonsched/workload.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace carbonsched {

// How much longer than its own duration a job may take to finish.
struct SlackBudget {
    enum class Kind { AbsoluteHours, RelativeFraction };

    Kind kind = Kind::AbsoluteHours;
    double value = 0.0;

    static SlackBudget hours(double h) { return {Kind::AbsoluteHours, h}; }
    static SlackBudget fraction(double f) { return {Kind::RelativeFraction, f}; }
    static SlackBudget intervals(std::size_t k) { return hours(static_cast<double>(k) / kIntervalsPerHour); }

    void validate() const;
    // Absolute: hours * 12. Relative: ceil(fraction * job_intervals).
    std::size_t slack_intervals(std::size_t job_intervals) const;
    // "6h", "25%"
    std::string label() const;
    static SlackBudget parse(std::string_view text);

    friend bool operator==(const SlackBudget&, const SlackBudget&) = default;
};

enum class PausesDenominator { Window, JobDuration };

struct OptimizationOutcome {
    double baseline_grams = 0.0;
    double optimized_grams = 0.0;
    // (baseline - optimized) / baseline, 0 when the baseline is 0.
    double savings_fraction = 0.0;
    Schedule schedule;
    std::size_t n_pauses = 0;
    double pauses_per_hour = 0.0;
    // Intervals the optimizer controlled: job length plus slack.
    std::size_t window_intervals = 0;
    std::size_t slack_intervals = 0;
    bool forecast_limited = false;
};

// Index-level algorithms. `start` is the index of the earliest allowed
// interval (the baseline start); `slack` is in 5-minute intervals.

// Best contiguous run starting in {start, ..., start + slack}. Ties go to the
// earliest start; starts that would run past the series are skipped.
OptimizationOutcome flexible_start(std::span<const double> profile, std::span<const double> intensities,
                                   std::size_t start, std::size_t slack);

// flexible_start for several start windows at once; scores every candidate
// start only once. Result k corresponds to slacks[k].
std::vector<OptimizationOutcome> flexible_start(std::span<const double> profile, std::span<const double> intensities,
                                                std::size_t start, std::span<const std::size_t> slacks);

// Runs the job in the n cheapest intervals of [start, start + n + slack),
// ordered by (intensity, index); profile segment j goes to the j-th chosen
// interval in time order.
OptimizationOutcome pause_resume(std::span<const double> profile, std::span<const double> intensities,
                                 std::size_t start, std::size_t slack,
                                 PausesDenominator denominator = PausesDenominator::Window);

struct ThresholdOutcome {
    Schedule schedule;
    // Window intervals elapsed beyond the job length when the job completes.
    std::size_t slack_used = 0;
};

// Walks [start, start + window) in time order, running in every interval
// strictly below `threshold`; intervals equal to it are used left to right
// only as far as needed to complete `n_intervals`.
ThresholdOutcome threshold_schedule(std::size_t n_intervals, std::span<const double> intensities,
                                    std::size_t start, std::size_t window, double threshold);

// Series-level wrappers: t0 must be an aligned timestamp inside the series.
OptimizationOutcome flexible_start(const EnergyProfile& profile, const IntensitySeries& series, Timestamp t0,
                                   const SlackBudget& window);
OptimizationOutcome pause_resume(const EnergyProfile& profile, const IntensitySeries& series, Timestamp t0,
                                 const SlackBudget& slack,
                                 PausesDenominator denominator = PausesDenominator::Window);
ThresholdOutcome threshold_schedule(const EnergyProfile& profile, const IntensitySeries& series, Timestamp t0,
                                    std::size_t window_intervals, double threshold);

enum class Algorithm { FlexibleStart, PauseResume };

std::string algorithm_name(Algorithm algorithm);

// Runs an optimizer with its window cut to what a forecast of
// `horizon_hours` can see. Flexible Start clamps its start window to the
// horizon; Pause and Resume clamps its whole (job + slack) window.
OptimizationOutcome forecast_clamped(Algorithm algorithm, const EnergyProfile& profile, const IntensitySeries& series,
                                     Timestamp t0, const SlackBudget& requested, double horizon_hours,
                                     PausesDenominator denominator = PausesDenominator::Window);

} // namespace carbonsched
