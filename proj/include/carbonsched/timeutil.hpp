#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace carbonsched {

using Timestamp = std::chrono::sys_seconds;

inline constexpr std::int64_t kStepSeconds = 300;
inline constexpr std::int64_t kIntervalsPerHour = 3600 / kStepSeconds;

// Accepts `YYYY-MM-DDTHH:MM:SS[.000]Z` or an explicit `+00:00` offset.
// Anything without a UTC designator is rejected as local time.
Timestamp parse_rfc3339_utc(std::string_view text);

// Canonical form: `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_rfc3339(Timestamp ts);

// UTC date `YYYY-MM-DD` at midnight.
Timestamp parse_utc_date(std::string_view text);

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour = 0, int minute = 0);

inline std::int64_t seconds_since_epoch(Timestamp ts) { return ts.time_since_epoch().count(); }

inline bool is_aligned(Timestamp ts) { return seconds_since_epoch(ts) % kStepSeconds == 0; }

// Shortest decimal that round-trips to the same double.
std::string format_decimal(double value);

} // namespace carbonsched
