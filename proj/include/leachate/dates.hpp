#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace leachate {

// Calendar dates are carried as days since 1970-01-01 internally; the
// civil <-> serial conversion below is Howard Hinnant's algorithm.
using DayNumber = std::int64_t;

enum class Weekday { Monday = 0, Tuesday, Wednesday, Thursday, Friday, Saturday, Sunday };

inline DayNumber days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<DayNumber>(era) * 146097 + static_cast<DayNumber>(doe) - 719468;
}

struct CivilDate {
    int year;
    unsigned month;
    unsigned day;
};

inline CivilDate civil_from_days(DayNumber z) {
    z += 719468;
    const DayNumber era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {y + (m <= 2), m, d};
}

inline Weekday weekday_of(DayNumber z) {
    // 1970-01-01 was a Thursday.
    return static_cast<Weekday>(((z % 7) + 7 + 3) % 7);
}

inline bool is_weekend(DayNumber z) {
    Weekday w = weekday_of(z);
    return w == Weekday::Saturday || w == Weekday::Sunday;
}

inline std::string format_iso(DayNumber z) {
    CivilDate c = civil_from_days(z);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", c.year, c.month, c.day);
    return buf;
}

// Parses a date against a strftime-like pattern supporting %Y, %m, %d and
// literal separators. Default pattern is ISO-8601.
inline DayNumber parse_date(const std::string& text, const std::string& pattern = "%Y-%m-%d") {
    int year = 0;
    unsigned month = 0, day = 0;
    bool have_y = false, have_m = false, have_d = false;
    std::size_t ti = 0;
    auto read_int = [&](int width, long& out) {
        long v = 0;
        int n = 0;
        bool neg = false;
        if (ti < text.size() && text[ti] == '-' && n == 0 && width == 4) {
            neg = true;
            ++ti;
        }
        while (ti < text.size() && n < width && text[ti] >= '0' && text[ti] <= '9') {
            v = v * 10 + (text[ti] - '0');
            ++ti;
            ++n;
        }
        if (n == 0) throw std::runtime_error("invalid date '" + text + "'");
        out = neg ? -v : v;
    };
    for (std::size_t pi = 0; pi < pattern.size(); ++pi) {
        if (pattern[pi] == '%' && pi + 1 < pattern.size()) {
            long v = 0;
            switch (pattern[++pi]) {
                case 'Y': read_int(4, v); year = static_cast<int>(v); have_y = true; break;
                case 'm': read_int(2, v); month = static_cast<unsigned>(v); have_m = true; break;
                case 'd': read_int(2, v); day = static_cast<unsigned>(v); have_d = true; break;
                default: throw std::runtime_error(std::string("unsupported date field %") + pattern[pi]);
            }
        } else {
            if (ti >= text.size() || text[ti] != pattern[pi])
                throw std::runtime_error("invalid date '" + text + "' for pattern '" + pattern + "'");
            ++ti;
        }
    }
    if (!have_y || !have_m || !have_d || ti != text.size())
        throw std::runtime_error("invalid date '" + text + "' for pattern '" + pattern + "'");
    if (month < 1 || month > 12 || day < 1 || day > 31)
        throw std::runtime_error("invalid date '" + text + "'");
    return days_from_civil(year, month, day);
}

}  // namespace leachate
