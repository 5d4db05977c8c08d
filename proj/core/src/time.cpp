#include "evsim/time.hpp"

#include <cstdio>

#include "evsim/errors.hpp"

namespace evsim {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b)
{
    return a - floor_div(a, b) * b;
}

} // namespace

std::int64_t days_from_civil(int y, unsigned m, unsigned d)
{
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, unsigned& month, unsigned& day)
{
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = doy - (153 * mp + 2) / 5 + 1;
    month = mp + (mp < 10 ? 3 : -9);
    year = static_cast<int>(y + (month <= 2));
}

bool is_leap_year(int y)
{
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(int y, unsigned m)
{
    static constexpr unsigned lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12) {
        throw InternalError("month out of range: " + std::to_string(m));
    }
    if (m == 2 && is_leap_year(y)) {
        return 29;
    }
    return lengths[m - 1];
}

SimTime SimTime::from_ymd(int year, unsigned month, unsigned day, unsigned hour, unsigned minute)
{
    if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) || hour > 23 ||
        minute > 59) {
        throw DataError("invalid date/time components");
    }
    return SimTime(days_from_civil(year, month, day) * kMinutesPerDay + hour * kMinutesPerHour +
                   minute);
}

SimTime SimTime::parse(const std::string& iso)
{
    int y = 0;
    unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 'T';
    const int full = std::sscanf(iso.c_str(), "%d-%u-%u%c%u:%u:%u", &y, &mo, &d, &sep, &h, &mi, &s);
    if (full == 3) {
        h = mi = s = 0;
    }
    else if (full != 6 && full != 7) {
        throw DataError("unparsable timestamp '" + iso + "' (expected ISO-8601)");
    }
    if (full >= 6 && sep != 'T' && sep != ' ') {
        throw DataError("unparsable timestamp '" + iso + "' (expected ISO-8601)");
    }
    if (s != 0) {
        throw DataError("timestamp '" + iso + "' has sub-minute precision; minute resolution required");
    }
    if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo) || h > 23 || mi > 59) {
        throw DataError("timestamp '" + iso + "' out of range");
    }
    return from_ymd(y, mo, d, h, mi);
}

std::int64_t SimTime::hour_index() const
{
    return floor_div(m_minutes, kMinutesPerHour);
}

std::int64_t SimTime::day_index() const
{
    return floor_div(m_minutes, kMinutesPerDay);
}

std::int64_t SimTime::month_index() const
{
    int y;
    unsigned mo, d;
    civil(y, mo, d);
    return static_cast<std::int64_t>(y - 1970) * 12 + (mo - 1);
}

SimTime SimTime::floor_hour() const
{
    return SimTime(floor_div(m_minutes, kMinutesPerHour) * kMinutesPerHour);
}

SimTime SimTime::ceil_hour() const
{
    const std::int64_t f = floor_div(m_minutes, kMinutesPerHour) * kMinutesPerHour;
    return SimTime(f == m_minutes ? f : f + kMinutesPerHour);
}

SimTime SimTime::floor_day() const
{
    return SimTime(floor_div(m_minutes, kMinutesPerDay) * kMinutesPerDay);
}

int SimTime::hour_of_day() const
{
    return static_cast<int>(floor_mod(m_minutes, kMinutesPerDay) / kMinutesPerHour);
}

int SimTime::minute_of_hour() const
{
    return static_cast<int>(floor_mod(m_minutes, kMinutesPerHour));
}

int SimTime::day_of_week() const
{
    // 1970-01-01 was a Thursday (index 3 with Monday = 0).
    return static_cast<int>(floor_mod(day_index() + 3, 7));
}

void SimTime::civil(int& year, unsigned& month, unsigned& day) const
{
    civil_from_days(day_index(), year, month, day);
}

int SimTime::year() const
{
    int y;
    unsigned mo, d;
    civil(y, mo, d);
    return y;
}

unsigned SimTime::month() const
{
    int y;
    unsigned mo, d;
    civil(y, mo, d);
    return mo;
}

unsigned SimTime::day() const
{
    int y;
    unsigned mo, d;
    civil(y, mo, d);
    return d;
}

std::string SimTime::iso() const
{
    int y;
    unsigned mo, d;
    civil(y, mo, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:00", y, mo, d, hour_of_day(),
                  minute_of_hour());
    return buf;
}

std::string hour_iso(std::int64_t hour_index)
{
    return SimTime::from_hour_index(hour_index).iso();
}

std::string day_iso(std::int64_t day_index)
{
    int y;
    unsigned mo, d;
    civil_from_days(day_index, y, mo, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, mo, d);
    return buf;
}

} // namespace evsim
