#include "carbonsched/timeutil.hpp"

#include "carbonsched/error.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace carbonsched {

namespace {

int parse_digits(std::string_view text, std::size_t pos, std::size_t count, std::string_view whole)
{
    if (pos + count > text.size()) {
        fail_validation("malformed timestamp '" + std::string(whole) + "'");
    }
    int value = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        const char c = text[i];
        if (c < '0' || c > '9') {
            fail_validation("malformed timestamp '" + std::string(whole) + "'");
        }
        value = value * 10 + (c - '0');
    }
    return value;
}

void expect_char(std::string_view text, std::size_t pos, char c, std::string_view whole)
{
    if (pos >= text.size() || text[pos] != c) {
        fail_validation("malformed timestamp '" + std::string(whole) + "'");
    }
}

std::chrono::sys_days checked_date(int y, int m, int d, std::string_view whole)
{
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        fail_validation("malformed timestamp '" + std::string(whole) + "': invalid calendar date");
    }
    return sys_days{ymd};
}

} // namespace

Timestamp parse_rfc3339_utc(std::string_view text)
{
    // 2020-01-01T00:05:00Z
    const int y = parse_digits(text, 0, 4, text);
    expect_char(text, 4, '-', text);
    const int mo = parse_digits(text, 5, 2, text);
    expect_char(text, 7, '-', text);
    const int d = parse_digits(text, 8, 2, text);
    if (text.size() <= 10 || (text[10] != 'T' && text[10] != 't')) {
        fail_validation("malformed timestamp '" + std::string(text) + "'");
    }
    const int h = parse_digits(text, 11, 2, text);
    expect_char(text, 13, ':', text);
    const int mi = parse_digits(text, 14, 2, text);
    expect_char(text, 16, ':', text);
    const int s = parse_digits(text, 17, 2, text);
    if (h > 23 || mi > 59 || s > 59) {
        fail_validation("malformed timestamp '" + std::string(text) + "': time of day out of range");
    }

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t digits_start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            if (text[pos] != '0') {
                fail_validation("timestamp '" + std::string(text) + "' has sub-second precision");
            }
            ++pos;
        }
        if (pos == digits_start) {
            fail_validation("malformed timestamp '" + std::string(text) + "'");
        }
    }

    const std::string_view zone = text.substr(pos);
    if (zone != "Z" && zone != "z" && zone != "+00:00") {
        if (zone.empty()) {
            fail_validation("timestamp '" + std::string(text) + "' has no UTC designator; local times are not accepted");
        }
        fail_validation("timestamp '" + std::string(text) + "' is not UTC; only 'Z' or '+00:00' offsets are accepted");
    }

    using namespace std::chrono;
    return Timestamp{checked_date(y, mo, d, text)} + hours{h} + minutes{mi} + seconds{s};
}

Timestamp parse_utc_date(std::string_view text)
{
    if (text.size() != 10) {
        fail_validation("malformed date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    const int y = parse_digits(text, 0, 4, text);
    expect_char(text, 4, '-', text);
    const int mo = parse_digits(text, 5, 2, text);
    expect_char(text, 7, '-', text);
    const int d = parse_digits(text, 8, 2, text);
    return Timestamp{checked_date(y, mo, d, text)};
}

std::string format_rfc3339(Timestamp ts)
{
    using namespace std::chrono;
    const auto day_point = floor<days>(ts);
    const year_month_day ymd{day_point};
    const hh_mm_ss tod{ts - day_point};
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
    return std::string(buf.data());
}

Timestamp make_timestamp(int year, unsigned month, unsigned day, int hour, int minute)
{
    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!ymd.ok()) {
        fail_validation("invalid calendar date");
    }
    return Timestamp{sys_days{ymd}} + hours{hour} + minutes{minute};
}

std::string format_decimal(double value)
{
    std::array<char, 64> buf{};
    const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), result.ptr);
}

} // namespace carbonsched
