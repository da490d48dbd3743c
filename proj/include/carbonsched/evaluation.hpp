#pragma once

#include "carbonsched/grid.hpp"
#include "carbonsched/scheduler.hpp"
#include "carbonsched/workload.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace carbonsched {

struct SamplingSpec {
    enum class Mode { FixedDays, SeededRandom };

    int year = 2020;
    int samples_per_month = 5;
    Mode mode = Mode::FixedDays;
    std::uint64_t seed = 0;
    // Days of the month used by FixedDays, at 00:00 UTC.
    std::vector<unsigned> fixed_days{3, 9, 15, 21, 27};

    void validate() const;
};

// Start timestamps, month by month, ascending within each month.
std::vector<Timestamp> sampling_plan(const SamplingSpec& spec);

// Linear interpolation between order statistics: position (n - 1) * p.
double quantile(std::span<const double> sorted, double p);

struct RegionStats {
    std::string region_id;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double mean = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    std::size_t samples = 0;
    std::size_t skipped = 0;
    // Baseline grams per included start, in plan order.
    std::vector<double> grams;
    std::vector<Timestamp> starts;
};

// Emissions of an unshifted run at every planned start, per region.
std::vector<RegionStats> region_comparison(const EnergyProfile& profile,
                                           const std::map<std::string, IntensitySeries>& regions,
                                           std::span<const Timestamp> starts);

struct TimeOfDayTable {
    std::vector<Timestamp> dates;
    std::vector<double> hours;
    // grams[d][h]: run starting at dates[d] + hours[h].
    std::vector<std::vector<double>> grams;
};

TimeOfDayTable time_of_day_sweep(const EnergyProfile& profile, const IntensitySeries& series,
                                 std::span<const Timestamp> dates, std::span<const double> hours);

struct SweepCell {
    std::string model;
    std::string region;
    SlackBudget slack;
    Algorithm algorithm = Algorithm::FlexibleStart;
    double mean_gain = 0.0;
    double mean_pauses_per_hour = 0.0;
    std::size_t samples = 0;
    std::size_t excluded = 0;
};

struct SweepSample {
    std::size_t cell = 0; // index into SweepReport::cells
    Timestamp start;
    double gain = 0.0;
    double pauses_per_hour = 0.0;
};

inline constexpr std::string_view kAllRegions = "ALL";

struct SweepReport {
    std::vector<Timestamp> planned_starts;
    // Ordered by model, region, slack, algorithm (inputs' order).
    std::vector<SweepCell> cells;
    // Samples pooled over every region; region == kAllRegions.
    std::vector<SweepCell> region_averages;
    std::vector<SweepSample> samples;
    PausesDenominator denominator = PausesDenominator::Window;
};

struct SweepOptions {
    unsigned threads = 1;
    PausesDenominator denominator = PausesDenominator::Window;
    bool keep_samples = false;
};

// Mean savings of both optimizers for every (job, region, slack), over the
// planned starts. Starts whose window leaves the series are excluded and
// counted. Output is independent of the thread count.
SweepReport gains_sweep(std::span<const JobSpec> jobs, const std::map<std::string, IntensitySeries>& regions,
                        std::span<const SlackBudget> slacks, std::span<const Timestamp> starts,
                        const SweepOptions& options = {});

// {6, 12, 18, 24} h and {25, 50, 75, 100} %.
std::vector<SlackBudget> default_slack_set();

} // namespace carbonsched
