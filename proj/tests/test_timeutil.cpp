#include "carbonsched/error.hpp"
#include "carbonsched/timeutil.hpp"

#include <doctest.h>

using namespace carbonsched;

TEST_CASE("RFC 3339 UTC timestamps")
{
    const auto ts = parse_rfc3339_utc("2020-03-01T06:05:00Z");
    CHECK(format_rfc3339(ts) == "2020-03-01T06:05:00Z");
    CHECK(ts == make_timestamp(2020, 3, 1, 6, 5));
    CHECK(parse_rfc3339_utc("2020-03-01T06:05:00+00:00") == ts);
    CHECK(parse_rfc3339_utc("2020-03-01T06:05:00.000Z") == ts);
    CHECK(is_aligned(ts));
    CHECK_FALSE(is_aligned(parse_rfc3339_utc("2020-03-01T06:06:00Z")));

    SUBCASE("local times are rejected")
    {
        CHECK_THROWS_AS(parse_rfc3339_utc("2020-03-01T06:05:00"), Error);
        CHECK_THROWS_AS(parse_rfc3339_utc("2020-03-01T06:05:00-06:00"), Error);
    }
    SUBCASE("malformed")
    {
        CHECK_THROWS_AS(parse_rfc3339_utc("2020-02-30T00:00:00Z"), Error);
        CHECK_THROWS_AS(parse_rfc3339_utc("2020-03-01 06:05:00Z"), Error);
        CHECK_THROWS_AS(parse_rfc3339_utc("2020-03-01T25:00:00Z"), Error);
        CHECK_THROWS_AS(parse_rfc3339_utc("2020-03-01T06:05:00.5Z"), Error);
        CHECK_THROWS_AS(parse_rfc3339_utc(""), Error);
    }
}

TEST_CASE("dates and decimals")
{
    CHECK(parse_utc_date("2020-12-31") == make_timestamp(2020, 12, 31));
    CHECK_THROWS_AS(parse_utc_date("2020-1-1"), Error);
    CHECK(format_decimal(100.0) == "100");
    CHECK(format_decimal(0.1 + 0.2) == "0.30000000000000004");
    CHECK(format_decimal(7460.0) == "7460");
}
