#include "carbonsched/grid.hpp"

#include "carbonsched/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace carbonsched {

namespace {

constexpr std::string_view kHeader = "timestamp,intensity_gco2_per_kwh";

struct Row {
    Timestamp ts;
    std::optional<double> value;
    std::size_t line = 0;
};

std::optional<double> parse_value(std::string_view field, Timestamp ts, std::size_t line)
{
    if (field.empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        fail_validation("line " + std::to_string(line) + ": malformed intensity '" + std::string(field) + "'");
    }
    if (!std::isfinite(value)) {
        fail_validation("line " + std::to_string(line) + ": non-finite intensity at " + format_rfc3339(ts));
    }
    if (value < 0.0) {
        fail_validation("line " + std::to_string(line) + ": negative intensity at " + format_rfc3339(ts));
    }
    return value;
}

std::vector<Row> read_rows(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        fail_validation("empty grid file");
    }
    ++line_no;
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) {
        line.erase(0, 3);
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kHeader) {
        fail_validation("unexpected header '" + line + "', expected '" + std::string(kHeader) + "'");
    }

    std::vector<Row> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            fail_validation("line " + std::to_string(line_no) + ": expected 2 fields");
        }
        const std::string_view text(line);
        Row row;
        row.line = line_no;
        row.ts = parse_rfc3339_utc(text.substr(0, comma));
        row.value = parse_value(text.substr(comma + 1), row.ts, line_no);
        if (!rows.empty() && row.ts <= rows.back().ts) {
            fail_validation("line " + std::to_string(line_no) + ": non-monotonic timestamps (" + format_rfc3339(row.ts) +
                            " after " + format_rfc3339(rows.back().ts) + ")");
        }
        rows.push_back(row);
    }
    if (rows.empty()) {
        fail_validation("grid file has no data rows");
    }
    return rows;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

} // namespace

IntensitySeries::IntensitySeries(std::string region_id, Timestamp epoch_start, std::vector<double> values)
    : region_id_(std::move(region_id)), epoch_start_(epoch_start), values_(std::move(values))
{
    if (!is_aligned(epoch_start_)) {
        fail_validation("series epoch " + format_rfc3339(epoch_start_) + " is not on a 5-minute boundary");
    }
    if (values_.empty()) {
        fail_validation("series '" + region_id_ + "' is empty");
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k]) || values_[k] < 0.0) {
            fail_validation("series '" + region_id_ + "': invalid intensity at " + format_rfc3339(time_at(k)));
        }
    }
}

std::size_t IntensitySeries::index_of(Timestamp ts) const
{
    if (!is_aligned(ts)) {
        fail_validation("timestamp " + format_rfc3339(ts) + " is not on a 5-minute boundary");
    }
    if (ts < epoch_start_ || ts >= end()) {
        fail_coverage("timestamp " + format_rfc3339(ts) + " outside series coverage [" + format_rfc3339(epoch_start_) +
                      ", " + format_rfc3339(end()) + ")");
    }
    return static_cast<std::size_t>((ts - epoch_start_).count() / kStepSeconds);
}

void IntensitySeries::require_coverage(std::size_t first, std::size_t count) const
{
    if (!covers(first, count)) {
        fail_coverage("window exceeds series coverage: need [" + format_rfc3339(time_at(first)) + ", " +
                      format_rfc3339(time_at(first + count)) + "), series '" + region_id_ + "' covers [" +
                      format_rfc3339(epoch_start_) + ", " + format_rfc3339(end()) + ")");
    }
}

double IntensitySeries::mean() const
{
    return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double IntensitySeries::min() const { return *std::min_element(values_.begin(), values_.end()); }

double IntensitySeries::max() const { return *std::max_element(values_.begin(), values_.end()); }

LoadedSeries parse_series(std::istream& in, FillPolicy policy, std::string region_id)
{
    const std::vector<Row> rows = read_rows(in);

    std::int64_t min_step = 0;
    bool has_native_step = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const std::int64_t d = (rows[i].ts - rows[i - 1].ts).count();
        min_step = (i == 1) ? d : std::min(min_step, d);
        has_native_step = has_native_step || d <= kStepSeconds;
    }
    // With a single spacing we cannot tell a coarse series from a gap; treat it as a gap.
    if (rows.size() > 2 && !has_native_step) {
        fail_validation("input step of " + std::to_string(min_step) + " s is coarser than 300 s");
    }

    const bool finer = rows.size() > 1 && min_step < kStepSeconds;
    if (finer && kStepSeconds % min_step != 0) {
        fail_validation("input step of " + std::to_string(min_step) + " s cannot be resampled to 300 s");
    }

    // Bucket rows onto the 300 s grid, averaging sub-step samples.
    struct Bucket {
        double sum = 0.0;
        std::size_t count = 0;
    };
    const std::int64_t first_bucket = floor_div(seconds_since_epoch(rows.front().ts), kStepSeconds);
    const std::int64_t last_bucket = floor_div(seconds_since_epoch(rows.back().ts), kStepSeconds);
    std::vector<Bucket> buckets(static_cast<std::size_t>(last_bucket - first_bucket + 1));
    for (const Row& row : rows) {
        if (!finer && !is_aligned(row.ts)) {
            fail_validation("line " + std::to_string(row.line) + ": timestamp " + format_rfc3339(row.ts) +
                            " is not on a 5-minute boundary");
        }
        if (row.value) {
            auto& b = buckets[static_cast<std::size_t>(floor_div(seconds_since_epoch(row.ts), kStepSeconds) - first_bucket)];
            b.sum += *row.value;
            ++b.count;
        }
    }

    const Timestamp epoch{std::chrono::seconds(first_bucket * kStepSeconds)};
    std::vector<double> values(buckets.size());
    std::size_t filled = 0;
    std::size_t run = 0;
    for (std::size_t k = 0; k < buckets.size(); ++k) {
        const Timestamp slot = epoch + std::chrono::seconds(static_cast<std::int64_t>(k) * kStepSeconds);
        if (buckets[k].count > 0) {
            values[k] = buckets[k].sum / static_cast<double>(buckets[k].count);
            run = 0;
            continue;
        }
        if (policy == FillPolicy::Reject) {
            fail_validation("missing 5-minute slot at " + format_rfc3339(slot));
        }
        if (k == 0) {
            fail_validation("leading gap at " + format_rfc3339(slot) + ": cannot forward-fill");
        }
        if (++run > kMaxForwardFill) {
            fail_validation("gap at " + format_rfc3339(slot) + " exceeds the forward-fill cap of " +
                            std::to_string(kMaxForwardFill) + " slots");
        }
        values[k] = values[k - 1];
        ++filled;
    }

    LoadedSeries out{IntensitySeries(std::move(region_id), epoch, std::move(values)), filled, finer ? rows.size() : 0};
    return out;
}

LoadedSeries load_series(const std::filesystem::path& path, FillPolicy policy)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail_validation("cannot open grid file " + path.string());
    }
    try {
        return parse_series(in, policy, path.stem().string());
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

void write_series(const IntensitySeries& series, std::ostream& out)
{
    out << kHeader << '\n';
    for (std::size_t k = 0; k < series.size(); ++k) {
        out << format_rfc3339(series.time_at(k)) << ',' << format_decimal(series[k]) << '\n';
    }
}

void write_series(const IntensitySeries& series, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail_validation("cannot write grid file " + path.string());
    }
    write_series(series, out);
}

std::map<std::string, IntensitySeries> load_region_dir(const std::filesystem::path& dir, FillPolicy policy)
{
    if (!std::filesystem::is_directory(dir)) {
        fail_validation("grid directory " + dir.string() + " does not exist");
    }
    std::map<std::string, IntensitySeries> regions;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            auto loaded = load_series(entry.path(), policy);
            regions.emplace(loaded.series.region_id(), std::move(loaded.series));
        }
    }
    if (regions.empty()) {
        fail_validation("no <region>.csv files in " + dir.string());
    }
    return regions;
}

IntensitySeries slice(const IntensitySeries& series, Timestamp start, std::size_t n_intervals)
{
    if (!is_aligned(start)) {
        fail_validation("slice start " + format_rfc3339(start) + " is not on a 5-minute boundary");
    }
    if (n_intervals == 0) {
        fail_validation("slice must contain at least one interval");
    }
    if (start < series.epoch_start() || start + std::chrono::seconds(static_cast<std::int64_t>(n_intervals) * kStepSeconds) > series.end()) {
        fail_coverage("window exceeds series coverage: [" + format_rfc3339(start) + " + " + std::to_string(n_intervals) +
                      " intervals) vs [" + format_rfc3339(series.epoch_start()) + ", " + format_rfc3339(series.end()) + ")");
    }
    const std::size_t first = series.index_of(start);
    const auto values = series.values().subspan(first, n_intervals);
    return IntensitySeries(series.region_id(), start, std::vector<double>(values.begin(), values.end()));
}

void SyntheticGridSpec::validate() const
{
    if (!(period_hours > 0.0) || !std::isfinite(period_hours)) {
        fail_validation("period_hours must be > 0");
    }
    if (days <= 0) {
        fail_validation("days must be > 0");
    }
    if (!(noise_stddev >= 0.0) || !std::isfinite(noise_stddev)) {
        fail_validation("noise_stddev must be >= 0");
    }
    if (!std::isfinite(base) || !std::isfinite(amplitude) || !std::isfinite(phase_hours)) {
        fail_validation("synthetic grid parameters must be finite");
    }
    if (!is_aligned(epoch_start)) {
        fail_validation("synthetic grid epoch must be on a 5-minute boundary");
    }
}

IntensitySeries generate_synthetic(const SyntheticGridSpec& spec)
{
    spec.validate();
    const std::size_t n = static_cast<std::size_t>(spec.days) * 24 * kIntervalsPerHour;
    std::vector<double> values(n);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_stddev > 0.0 ? spec.noise_stddev : 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double hours = static_cast<double>(k) * static_cast<double>(kStepSeconds) / 3600.0;
        double v = spec.base + spec.amplitude * std::sin(2.0 * std::numbers::pi * (hours - spec.phase_hours) / spec.period_hours);
        if (spec.noise_stddev > 0.0) {
            v += noise(rng);
        }
        values[k] = std::max(0.0, v);
    }
    return IntensitySeries(spec.region_id, spec.epoch_start, std::move(values));
}

} // namespace carbonsched
