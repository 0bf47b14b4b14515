#include "dfclab/timeutil.hpp"

#include <cstdio>

#include "dfclab/errors.hpp"

namespace dfclab::timeutil {

std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

std::int64_t utc_from_civil(int y, int m, int d, int hh, int mm, int ss) {
    return days_from_civil(y, m, d) * 86400 + hh * 3600 + mm * 60 + ss;
}

std::int64_t parse_iso8601_utc(const std::string& text) {
    int y, mo, d, hh, mm, ss;
    char z = 0, tail = 0;
    const int matched =
        std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c%c", &y, &mo, &d, &hh, &mm, &ss, &z, &tail);
    if (matched != 7 || z != 'Z')
        throw ValidationError("timestamp '" + text + "' is not ISO-8601 UTC (YYYY-MM-DDTHH:MM:SSZ)");
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || hh > 23 || hh < 0 || mm > 59 || mm < 0 ||
        ss > 60 || ss < 0)
        throw ValidationError("timestamp '" + text + "' has out-of-range fields");
    return utc_from_civil(y, mo, d, hh, mm, ss);
}

std::string format_iso8601_utc(std::int64_t timestamp) {
    std::int64_t days = timestamp / 86400;
    std::int64_t rem = timestamp % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    const CivilDate cd = civil_from_days(days);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", cd.year, cd.month, cd.day,
                  static_cast<int>(rem / 3600), static_cast<int>((rem % 3600) / 60),
                  static_cast<int>(rem % 60));
    return buf;
}

int day_of_year(std::int64_t timestamp) {
    std::int64_t days = timestamp / 86400;
    if (timestamp % 86400 < 0) days -= 1;
    const CivilDate cd = civil_from_days(days);
    return static_cast<int>(days - days_from_civil(cd.year, 1, 1)) + 1;
}

} // namespace dfclab::timeutil
