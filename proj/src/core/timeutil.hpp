#pragma once

#include <cstdint>
#include <string>

namespace nightsense {

// All timestamps are milliseconds since the Unix epoch, UTC. Study nights are
// Friday and Saturday evenings, 20:00 to 04:00 of the next day; the night is
// keyed by the calendar date of its evening half, so a record at 00:30 on a
// Saturday belongs to Friday's night.

inline constexpr std::int64_t kMsPerSecond = 1000;
inline constexpr std::int64_t kMsPerMinute = 60 * kMsPerSecond;
inline constexpr std::int64_t kMsPerHour = 60 * kMsPerMinute;
inline constexpr std::int64_t kMsPerDay = 24 * kMsPerHour;

inline constexpr int kNightStartHour = 20;   // 20:00
inline constexpr int kNightHours = 8;        // until 04:00 next day
inline constexpr int kSlotMinutes = 10;
inline constexpr int kSlotsPerNight = kNightHours * 60 / kSlotMinutes; // 48

struct CivilDate {
    int year;
    int month; // 1..12
    int day;   // 1..31
};

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(int year, int month, int day);
CivilDate civil_from_days(std::int64_t days);

// 0=Monday .. 6=Sunday.
int weekday_from_days(std::int64_t days);

inline bool is_friday(std::int64_t days) { return weekday_from_days(days) == 4; }
inline bool is_saturday(std::int64_t days) { return weekday_from_days(days) == 5; }

// Floor division of a timestamp into whole days since epoch.
std::int64_t day_of_timestamp(std::int64_t ts_ms);

// "YYYY-MM-DD" for a day number; parse returns false on malformed input.
std::string format_date(std::int64_t days);
bool parse_date(const std::string& s, std::int64_t& days_out);

// Night membership. Returns true and sets night_date_days (the Friday or
// Saturday the night started on) when ts falls inside a weekend night span.
bool night_of_timestamp(std::int64_t ts_ms, std::int64_t& night_date_days);

// Start of a night span in ms (20:00 on night_date).
std::int64_t night_start_ms(std::int64_t night_date_days);

// Slot index 0..47 for a timestamp inside the night span. Throws input_error
// when ts lies outside [20:00, 04:00+1d).
int slot_index(std::int64_t ts_ms, std::int64_t night_date_days);

// "HH:MM" clock label for the start of a slot; end label is start + 9min.
std::string slot_start_clock(int slot);
std::string slot_end_clock(int slot);

} // namespace nightsense
