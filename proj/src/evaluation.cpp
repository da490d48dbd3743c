#include "carbonsched/evaluation.hpp"

#include "carbonsched/error.hpp"
#include "carbonsched/sci.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <thread>

namespace carbonsched {

namespace {

std::chrono::sys_days month_start(int year, unsigned month)
{
    return std::chrono::sys_days{std::chrono::year{year} / std::chrono::month{month} / std::chrono::day{1}};
}

// Index of `ts` in `series` if [ts, ts + length) is covered.
std::optional<std::size_t> covered_index(const IntensitySeries& series, Timestamp ts, std::size_t length)
{
    if (!is_aligned(ts) || ts < series.epoch_start() || ts >= series.end()) {
        return std::nullopt;
    }
    const auto idx = static_cast<std::size_t>((ts - series.epoch_start()).count() / kStepSeconds);
    if (!series.covers(idx, length)) {
        return std::nullopt;
    }
    return idx;
}

struct CellAccumulator {
    std::vector<double> gains;
    std::vector<double> pauses;
    std::size_t excluded = 0;

    void append(const CellAccumulator& other)
    {
        gains.insert(gains.end(), other.gains.begin(), other.gains.end());
        pauses.insert(pauses.end(), other.pauses.begin(), other.pauses.end());
        excluded += other.excluded;
    }
};

// Mean of the sorted values, so the result does not depend on sample order.
double order_free_mean(std::vector<double> values)
{
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

SweepCell make_cell(std::string model, std::string region, SlackBudget slack, Algorithm algorithm,
                    const CellAccumulator& acc)
{
    return SweepCell{std::move(model), std::move(region), slack, algorithm, order_free_mean(acc.gains),
                     order_free_mean(acc.pauses), acc.gains.size(), acc.excluded};
}

struct TaskResult {
    std::vector<CellAccumulator> cells; // slack-major, then algorithm
    std::vector<SweepSample> samples;   // cell is local (slack * 2 + algorithm)
};

TaskResult run_task(const EnergyProfile& profile, const IntensitySeries& series, std::span<const SlackBudget> slacks,
                    std::span<const Timestamp> starts, const SweepOptions& options)
{
    const std::size_t n = profile.size();
    std::vector<std::size_t> slack_intervals;
    for (const auto& s : slacks) {
        slack_intervals.push_back(s.slack_intervals(n));
    }

    TaskResult result;
    result.cells.resize(slacks.size() * 2);
    std::vector<std::size_t> fs_slacks;
    std::vector<std::size_t> fs_which;
    for (const Timestamp start : starts) {
        const auto base = covered_index(series, start, n);
        fs_slacks.clear();
        fs_which.clear();
        for (std::size_t k = 0; k < slacks.size(); ++k) {
            if (base && series.covers(*base, n + slack_intervals[k])) {
                fs_slacks.push_back(slack_intervals[k]);
                fs_which.push_back(k);
            } else {
                result.cells[2 * k].excluded++;
                result.cells[2 * k + 1].excluded++;
            }
        }
        if (fs_slacks.empty()) {
            continue;
        }
        const auto fs = flexible_start(profile.kwh(), series.values(), *base, fs_slacks);
        for (std::size_t i = 0; i < fs_which.size(); ++i) {
            const std::size_t k = fs_which[i];
            const auto pr = pause_resume(profile.kwh(), series.values(), *base, slack_intervals[k], options.denominator);
            const OptimizationOutcome* outcomes[2] = {&fs[i], &pr};
            for (std::size_t a = 0; a < 2; ++a) {
                auto& cell = result.cells[2 * k + a];
                cell.gains.push_back(outcomes[a]->savings_fraction);
                cell.pauses.push_back(outcomes[a]->pauses_per_hour);
                if (options.keep_samples) {
                    result.samples.push_back(
                        {2 * k + a, start, outcomes[a]->savings_fraction, outcomes[a]->pauses_per_hour});
                }
            }
        }
    }
    return result;
}

} // namespace

void SamplingSpec::validate() const
{
    if (samples_per_month < 1) {
        fail_validation("samples_per_month must be >= 1");
    }
    if (mode == Mode::FixedDays) {
        if (static_cast<std::size_t>(samples_per_month) > fixed_days.size()) {
            fail_validation("fixed-day sampling has " + std::to_string(fixed_days.size()) + " days but " +
                            std::to_string(samples_per_month) + " samples per month were requested");
        }
        for (unsigned d : fixed_days) {
            if (d < 1 || d > 28) {
                fail_validation("fixed sampling days must be in 1..28");
            }
        }
    }
}

std::vector<Timestamp> sampling_plan(const SamplingSpec& spec)
{
    spec.validate();
    std::vector<Timestamp> plan;
    std::mt19937_64 rng(spec.seed);
    for (unsigned month = 1; month <= 12; ++month) {
        const auto first = month_start(spec.year, month);
        if (spec.mode == SamplingSpec::Mode::FixedDays) {
            for (int i = 0; i < spec.samples_per_month; ++i) {
                plan.push_back(Timestamp{first + std::chrono::days{spec.fixed_days[static_cast<std::size_t>(i)] - 1}});
            }
            continue;
        }
        const auto next = month == 12 ? month_start(spec.year + 1, 1) : month_start(spec.year, month + 1);
        const auto slots = static_cast<std::uint64_t>((next - first).count()) * 24 * kIntervalsPerHour;
        if (static_cast<std::uint64_t>(spec.samples_per_month) > slots) {
            fail_validation("more samples per month than 5-minute slots");
        }
        std::set<std::uint64_t> drawn;
        std::uniform_int_distribution<std::uint64_t> pick(0, slots - 1);
        while (drawn.size() < static_cast<std::size_t>(spec.samples_per_month)) {
            drawn.insert(pick(rng));
        }
        for (const auto slot : drawn) {
            plan.push_back(Timestamp{first} + std::chrono::seconds(static_cast<std::int64_t>(slot) * kStepSeconds));
        }
    }
    return plan;
}

double quantile(std::span<const double> sorted, double p)
{
    if (sorted.empty()) {
        fail_validation("quantile of an empty sample");
    }
    const double pos = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

std::vector<RegionStats> region_comparison(const EnergyProfile& profile,
                                           const std::map<std::string, IntensitySeries>& regions,
                                           std::span<const Timestamp> starts)
{
    std::vector<RegionStats> out;
    for (const auto& [id, series] : regions) {
        RegionStats stats;
        stats.region_id = id;
        for (const Timestamp start : starts) {
            const auto idx = covered_index(series, start, profile.size());
            if (!idx) {
                stats.skipped++;
                continue;
            }
            stats.grams.push_back(contiguous_emissions(profile.kwh(), series.values(), *idx));
            stats.starts.push_back(start);
        }
        stats.samples = stats.grams.size();
        if (stats.samples > 0) {
            std::vector<double> sorted = stats.grams;
            std::sort(sorted.begin(), sorted.end());
            stats.min = sorted.front();
            stats.max = sorted.back();
            stats.q1 = quantile(sorted, 0.25);
            stats.median = quantile(sorted, 0.5);
            stats.q3 = quantile(sorted, 0.75);
            // Summing the sorted copy keeps the mean independent of sample order.
            stats.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
        }
        out.push_back(std::move(stats));
    }
    return out;
}

TimeOfDayTable time_of_day_sweep(const EnergyProfile& profile, const IntensitySeries& series,
                                 std::span<const Timestamp> dates, std::span<const double> hours)
{
    TimeOfDayTable table;
    table.dates.assign(dates.begin(), dates.end());
    table.hours.assign(hours.begin(), hours.end());
    for (const Timestamp date : dates) {
        std::vector<double> row;
        for (const double h : hours) {
            const double seconds = h * 3600.0;
            if (!std::isfinite(seconds) || std::abs(seconds - std::round(seconds)) > 1e-6) {
                fail_validation("hour offset " + format_decimal(h) + " is not a whole number of seconds");
            }
            const Timestamp start = date + std::chrono::seconds(static_cast<std::int64_t>(std::llround(seconds)));
            const std::size_t idx = series.index_of(start);
            series.require_coverage(idx, profile.size());
            row.push_back(contiguous_emissions(profile.kwh(), series.values(), idx));
        }
        table.grams.push_back(std::move(row));
    }
    return table;
}

SweepReport gains_sweep(std::span<const JobSpec> jobs, const std::map<std::string, IntensitySeries>& regions,
                        std::span<const SlackBudget> slacks, std::span<const Timestamp> starts,
                        const SweepOptions& options)
{
    std::vector<EnergyProfile> profiles;
    for (const auto& job : jobs) {
        profiles.push_back(quantize(job));
    }
    for (const auto& s : slacks) {
        s.validate();
    }
    std::vector<const IntensitySeries*> series;
    for (const auto& [id, s] : regions) {
        series.push_back(&s);
    }

    const std::size_t n_tasks = jobs.size() * series.size();
    std::vector<TaskResult> results(n_tasks);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t t = next++; t < n_tasks; t = next++) {
            results[t] = run_task(profiles[t / series.size()], *series[t % series.size()], slacks, starts, options);
        }
    };
    unsigned threads = options.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : options.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n_tasks, 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }

    SweepReport report;
    report.planned_starts.assign(starts.begin(), starts.end());
    report.denominator = options.denominator;
    const Algorithm algorithms[2] = {Algorithm::FlexibleStart, Algorithm::PauseResume};
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        std::vector<CellAccumulator> pooled(slacks.size() * 2);
        for (std::size_t r = 0; r < series.size(); ++r) {
            const TaskResult& task = results[j * series.size() + r];
            const std::size_t first_cell = report.cells.size();
            for (std::size_t c = 0; c < task.cells.size(); ++c) {
                report.cells.push_back(
                    make_cell(jobs[j].name, series[r]->region_id(), slacks[c / 2], algorithms[c % 2], task.cells[c]));
                pooled[c].append(task.cells[c]);
            }
            for (const auto& s : task.samples) {
                report.samples.push_back({first_cell + s.cell, s.start, s.gain, s.pauses_per_hour});
            }
        }
        for (std::size_t c = 0; c < pooled.size(); ++c) {
            report.region_averages.push_back(
                make_cell(jobs[j].name, std::string(kAllRegions), slacks[c / 2], algorithms[c % 2], pooled[c]));
        }
    }
    return report;
}

std::vector<SlackBudget> default_slack_set()
{
    return {SlackBudget::hours(6),       SlackBudget::hours(12),      SlackBudget::hours(18),
            SlackBudget::hours(24),      SlackBudget::fraction(0.25), SlackBudget::fraction(0.5),
            SlackBudget::fraction(0.75), SlackBudget::fraction(1.0)};
}

} // namespace carbonsched
