#pragma once

#include <cstdint>
#include <string>

namespace dfclab::timeutil {

struct CivilDate {
    int year;
    int month; // 1..12
    int day;   // 1..31
};

/// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's
/// days_from_civil) and its inverse.
std::int64_t days_from_civil(int y, int m, int d);
CivilDate civil_from_days(std::int64_t z);

std::int64_t utc_from_civil(int y, int m, int d, int hh = 0, int mm = 0, int ss = 0);

/// Strict "YYYY-MM-DDTHH:MM:SSZ" parser; throws ValidationError otherwise.
std::int64_t parse_iso8601_utc(const std::string& text);
std::string format_iso8601_utc(std::int64_t timestamp);

inline double seconds_of_day(std::int64_t timestamp) {
    std::int64_t s = timestamp % 86400;
    if (s < 0) s += 86400;
    return static_cast<double>(s);
}

/// 1-based ordinal day within the timestamp's year.
int day_of_year(std::int64_t timestamp);

} // namespace dfclab::timeutil
