#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace evsim {

// Proleptic Gregorian calendar helpers (days relative to 1970-01-01).
std::int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(std::int64_t days, int& year, unsigned& month, unsigned& day);
bool is_leap_year(int year);
unsigned days_in_month(int year, unsigned month);

inline constexpr std::int64_t kMinutesPerHour = 60;
inline constexpr std::int64_t kMinutesPerDay = 24 * 60;
inline constexpr std::int64_t kHoursPerDay = 24;

/// A point in simulation time: local clock time at minute resolution,
/// stored as minutes since 1970-01-01T00:00. No time zones, no DST.
class SimTime {
public:
    SimTime() = default;

    static SimTime from_minutes(std::int64_t minutes) { return SimTime(minutes); }
    static SimTime from_hour_index(std::int64_t hour) { return SimTime(hour * kMinutesPerHour); }
    static SimTime from_ymd(int year, unsigned month, unsigned day, unsigned hour = 0,
                            unsigned minute = 0);

    // Accepts "YYYY-MM-DD", "YYYY-MM-DDTHH:MM" and "YYYY-MM-DDTHH:MM:SS"
    // (space instead of 'T' also allowed; seconds must be zero). Throws DataError.
    static SimTime parse(const std::string& iso);

    std::int64_t minutes() const { return m_minutes; }
    std::int64_t hour_index() const;
    std::int64_t day_index() const;
    std::int64_t month_index() const; // months since 1970-01

    bool on_hour() const { return m_minutes % kMinutesPerHour == 0; }
    SimTime floor_hour() const;
    SimTime ceil_hour() const;
    SimTime floor_day() const;

    int hour_of_day() const;
    int minute_of_hour() const;
    int day_of_week() const; // 0 = Monday .. 6 = Sunday
    bool is_weekend() const { return day_of_week() >= 5; }

    void civil(int& year, unsigned& month, unsigned& day) const;
    int year() const;
    unsigned month() const;
    unsigned day() const;

    SimTime plus_minutes(std::int64_t m) const { return SimTime(m_minutes + m); }
    SimTime plus_hours(std::int64_t h) const { return SimTime(m_minutes + h * kMinutesPerHour); }
    SimTime plus_days(std::int64_t d) const { return SimTime(m_minutes + d * kMinutesPerDay); }

    std::string iso() const; // "YYYY-MM-DDTHH:MM:SS"

    friend auto operator<=>(const SimTime&, const SimTime&) = default;

private:
    explicit SimTime(std::int64_t minutes) : m_minutes(minutes) {}
    std::int64_t m_minutes = 0;
};

inline SimTime hour_start(std::int64_t hour_index) { return SimTime::from_hour_index(hour_index); }
std::string hour_iso(std::int64_t hour_index);
std::string day_iso(std::int64_t day_index); // "YYYY-MM-DD"

} // namespace evsim
