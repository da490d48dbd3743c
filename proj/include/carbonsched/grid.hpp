#pragma once

#include "carbonsched/timeutil.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace carbonsched {

/**
 * Marginal carbon intensity of one region over time, in gCO2eq/kWh.
 *
 * Values sit on a fixed 300 s grid starting at `epoch_start`; value k is
 * treated as the constant intensity over [epoch + k*300s, epoch + (k+1)*300s).
 * Immutable after construction.
 */
class IntensitySeries {
public:
    IntensitySeries(std::string region_id, Timestamp epoch_start, std::vector<double> values);

    const std::string& region_id() const { return region_id_; }
    Timestamp epoch_start() const { return epoch_start_; }
    // One past the last covered instant.
    Timestamp end() const { return time_at(values_.size()); }
    std::int64_t step_seconds() const { return kStepSeconds; }

    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }

    Timestamp time_at(std::size_t k) const
    {
        return epoch_start_ + std::chrono::seconds(static_cast<std::int64_t>(k) * kStepSeconds);
    }

    // Index of the interval starting at `ts`. Throws a validation error for a
    // misaligned timestamp and a coverage error when `ts` is outside the series.
    std::size_t index_of(Timestamp ts) const;

    // Throws a coverage error naming the missing range unless intervals
    // [first, first + count) all exist.
    void require_coverage(std::size_t first, std::size_t count) const;
    bool covers(std::size_t first, std::size_t count) const { return first + count <= values_.size(); }

    double mean() const;
    double min() const;
    double max() const;

private:
    std::string region_id_;
    Timestamp epoch_start_;
    std::vector<double> values_;
};

enum class FillPolicy { Reject, ForwardFill };

// Longest run of missing slots forward-fill will bridge (one hour).
inline constexpr std::size_t kMaxForwardFill = 12;

struct LoadedSeries {
    IntensitySeries series;
    std::size_t filled_slots = 0;
    // Input rows averaged into 300 s buckets (0 for native 5-minute input).
    std::size_t resampled_rows = 0;
};

LoadedSeries parse_series(std::istream& in, FillPolicy policy, std::string region_id);
LoadedSeries load_series(const std::filesystem::path& path, FillPolicy policy);

void write_series(const IntensitySeries& series, std::ostream& out);
void write_series(const IntensitySeries& series, const std::filesystem::path& path);

// One series per `<region_id>.csv` file, keyed by region id.
std::map<std::string, IntensitySeries> load_region_dir(const std::filesystem::path& dir, FillPolicy policy);

IntensitySeries slice(const IntensitySeries& series, Timestamp start, std::size_t n_intervals);

struct SyntheticGridSpec {
    std::string region_id = "synthetic";
    Timestamp epoch_start = make_timestamp(2020, 1, 1);
    double base = 400.0;
    double amplitude = 0.0;
    double period_hours = 24.0;
    double phase_hours = 0.0;
    std::int64_t days = 1;
    double noise_stddev = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// values[k] = max(0, base + amplitude*sin(2*pi*(hours(k) - phase)/period) + N(0, noise_stddev))
IntensitySeries generate_synthetic(const SyntheticGridSpec& spec);

} // namespace carbonsched
