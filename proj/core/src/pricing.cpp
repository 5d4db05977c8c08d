#include "evsim/pricing.hpp"

#include <algorithm>
#include <array>

#include "evsim/errors.hpp"

namespace evsim {

double HourlySeries::at_hour(std::int64_t hour) const
{
    if (!covers_hour(hour)) {
        throw DataError(name + ": no value for hour " + hour_iso(hour) + " (series covers " +
                        hour_iso(start_hour) + " .. " + hour_iso(end_hour()) + ")");
    }
    return values[static_cast<std::size_t>(hour - start_hour)];
}

bool TariffSeason::contains(MonthDay md) const
{
    if (from <= to) return from <= md && md <= to;
    return md >= from || md <= to; // wraps around the new year
}

void TariffSchedule::validate() const
{
    if (seasons.empty()) throw ConfigError(label + ": tariff schedule has no seasons");

    for (const TariffSeason& season : seasons) {
        if (season.periods.empty()) throw ConfigError(label + ": season has no periods");
        std::array<int, 24> cover{};
        for (const TariffPeriod& p : season.periods) {
            if (p.from_hour < 0 || p.to_hour > 24 || p.from_hour >= p.to_hour) {
                throw ConfigError(label + ": period hours must satisfy 0 <= from < to <= 24, got [" +
                                  std::to_string(p.from_hour) + ", " + std::to_string(p.to_hour) + ")");
            }
            if (p.rate_dkk_per_kwh < 0.0) {
                throw ConfigError(label + ": period rate must be >= 0");
            }
            for (int h = p.from_hour; h < p.to_hour; ++h) ++cover[static_cast<std::size_t>(h)];
        }
        for (int h = 0; h < 24; ++h) {
            if (cover[static_cast<std::size_t>(h)] != 1) {
                throw ConfigError(label + ": periods must cover each hour of day exactly once; hour " +
                                  std::to_string(h) + " is covered " +
                                  std::to_string(cover[static_cast<std::size_t>(h)]) + " times");
            }
        }
        auto valid_md = [](MonthDay md) {
            return md.month >= 1 && md.month <= 12 && md.day >= 1 &&
                   md.day <= days_in_month(2020, md.month); // leap year admits Feb 29
        };
        if (!valid_md(season.from) || !valid_md(season.to)) {
            throw ConfigError(label + ": season has an invalid month-day bound");
        }
    }

    // Every day of a leap year must fall in exactly one season.
    for (unsigned m = 1; m <= 12; ++m) {
        for (unsigned d = 1; d <= days_in_month(2020, m); ++d) {
            int n = 0;
            for (const TariffSeason& season : seasons) {
                if (season.contains(MonthDay{m, d})) ++n;
            }
            if (n != 1) {
                throw ConfigError(label + ": seasons must cover each calendar day exactly once; " +
                                  std::to_string(m) + "-" + std::to_string(d) + " is covered " +
                                  std::to_string(n) + " times");
            }
        }
    }
}

double TariffSchedule::rate_at(SimTime t) const
{
    int year = 0;
    unsigned month = 0, day = 0;
    t.civil(year, month, day);
    const MonthDay md{month, day};
    const int hod = t.hour_of_day();
    for (const TariffSeason& season : seasons) {
        if (!season.contains(md)) continue;
        for (const TariffPeriod& p : season.periods) {
            if (hod >= p.from_hour && hod < p.to_hour) return p.rate_dkk_per_kwh;
        }
    }
    throw InternalError(label + ": no tariff period for " + t.iso() + " (schedule not validated?)");
}

double tariff_rate_at(const TariffSchedule& schedule, SimTime t)
{
    return schedule.rate_at(t);
}

TariffSchedule TariffSchedule::tm3_default()
{
    TariffSchedule s;
    s.label = "tm3_default";
    TariffSeason all_year;
    all_year.from = MonthDay{1, 1};
    all_year.to = MonthDay{12, 31};
    all_year.periods = {
        TariffPeriod{0, 6, 0.15},
        TariffPeriod{6, 17, 0.50},
        TariffPeriod{17, 21, 1.25},
        TariffPeriod{21, 24, 0.40},
    };
    s.seasons.push_back(std::move(all_year));
    return s;
}

PriceComponents total_price_at(const SpotPriceSeries& spot, const TariffSchedule& schedule,
                               double fixed_addons, SimTime t)
{
    PriceComponents pc;
    pc.spot = spot.at_hour(t.hour_index());
    pc.tariff = schedule.rate_at(t);
    pc.fixed_addons = fixed_addons;
    return pc;
}

std::vector<std::int64_t> whole_hours_between(SimTime plug_in, SimTime departure)
{
    std::vector<std::int64_t> hours;
    const std::int64_t first = plug_in.ceil_hour().hour_index();
    const std::int64_t end = departure.floor_hour().hour_index();
    if (end <= first) return hours;
    hours.reserve(static_cast<std::size_t>(end - first));
    for (std::int64_t h = first; h < end; ++h) hours.push_back(h);
    return hours;
}

std::vector<PricedHour> price_horizon(const SpotPriceSeries& spot, const TariffSchedule& schedule,
                                      double fixed_addons, SimTime plug_in, SimTime departure)
{
    std::vector<PricedHour> horizon;
    for (std::int64_t h : whole_hours_between(plug_in, departure)) {
        horizon.push_back(PricedHour{h, total_price_at(spot, schedule, fixed_addons, hour_start(h))});
    }
    return horizon;
}

} // namespace evsim
