#include "core/timeutil.hpp"

#include "core/common.hpp"

#include <cstdio>

namespace nightsense {

std::int64_t days_from_civil(int y, int m, int d) {
    // Howard Hinnant's algorithm.
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);            // [0, 399]
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1; // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;           // [0, 146096]
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

int weekday_from_days(std::int64_t days) {
    // 1970-01-01 was a Thursday (index 3 with 0=Monday).
    return static_cast<int>(((days % 7) + 7 + 3) % 7);
}

std::int64_t day_of_timestamp(std::int64_t ts_ms) {
    std::int64_t d = ts_ms / kMsPerDay;
    if (ts_ms < 0 && ts_ms % kMsPerDay != 0) --d;
    return d;
}

std::string format_date(std::int64_t days) {
    const CivilDate c = civil_from_days(days);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
    return buf;
}

bool parse_date(const std::string& s, std::int64_t& days_out) {
    int y = 0, m = 0, d = 0, used = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d%n", &y, &m, &d, &used) != 3) return false;
    if (static_cast<std::size_t>(used) != s.size()) return false;
    if (m < 1 || m > 12 || d < 1 || d > 31) return false;
    days_out = days_from_civil(y, m, d);
    return true;
}

bool night_of_timestamp(std::int64_t ts_ms, std::int64_t& night_date_days) {
    const std::int64_t day = day_of_timestamp(ts_ms);
    const std::int64_t tod = ts_ms - day * kMsPerDay;
    const int hour = static_cast<int>(tod / kMsPerHour);
    if (hour >= kNightStartHour) {
        if (is_friday(day) || is_saturday(day)) {
            night_date_days = day;
            return true;
        }
        return false;
    }
    if (hour < kNightStartHour + kNightHours - 24) { // before 04:00
        const std::int64_t prev = day - 1;
        if (is_friday(prev) || is_saturday(prev)) {
            night_date_days = prev;
            return true;
        }
    }
    return false;
}

std::int64_t night_start_ms(std::int64_t night_date_days) {
    return night_date_days * kMsPerDay + kNightStartHour * kMsPerHour;
}

int slot_index(std::int64_t ts_ms, std::int64_t night_date_days) {
    const std::int64_t start = night_start_ms(night_date_days);
    const std::int64_t offset = ts_ms - start;
    if (offset < 0 || offset >= kNightHours * kMsPerHour)
        throw input_error("timestamp outside night span: " + std::to_string(ts_ms));
    return static_cast<int>(offset / (kSlotMinutes * kMsPerMinute));
}

std::string slot_start_clock(int slot) {
    const int minutes = slot * kSlotMinutes;
    const int h = (kNightStartHour + minutes / 60) % 24;
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02d:%02d", h, minutes % 60);
    return buf;
}

std::string slot_end_clock(int slot) {
    const int minutes = slot * kSlotMinutes + kSlotMinutes - 1;
    const int h = (kNightStartHour + minutes / 60) % 24;
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02d:%02d", h, minutes % 60);
    return buf;
}

} // namespace nightsense
