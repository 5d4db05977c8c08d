#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evsim/time.hpp"

namespace evsim {

/// A contiguous hourly series anchored at `start_hour` (hours since epoch).
/// Contiguity is structural: index i is the value for hour start_hour + i.
struct HourlySeries {
    std::int64_t start_hour = 0;
    std::vector<double> values;
    std::string name = "series"; // used in error messages

    std::int64_t end_hour() const { return start_hour + static_cast<std::int64_t>(values.size()); }
    bool covers_hour(std::int64_t hour) const { return hour >= start_hour && hour < end_hour(); }
    bool covers(std::int64_t first_hour, std::int64_t end_hour_excl) const
    {
        return first_hour >= start_hour && end_hour_excl <= end_hour();
    }

    double at_hour(std::int64_t hour) const; // throws DataError on a gap
};

using SpotPriceSeries = HourlySeries; // DKK/kWh, negative values allowed
using EmissionSeries = HourlySeries;  // gCO2/kWh, >= 0

/// Daily tariff period over the half-open hour interval [from_hour, to_hour).
struct TariffPeriod {
    int from_hour = 0;
    int to_hour = 24;
    double rate_dkk_per_kwh = 0.0;
};

struct MonthDay {
    unsigned month = 1;
    unsigned day = 1;

    friend auto operator<=>(const MonthDay&, const MonthDay&) = default;
};

/// Season over an inclusive month-day range, recurring every year. A range
/// with from > to wraps around the new year (e.g. Oct 1 .. Mar 31).
struct TariffSeason {
    MonthDay from{1, 1};
    MonthDay to{12, 31};
    std::vector<TariffPeriod> periods;

    bool contains(MonthDay md) const;
};

struct TariffSchedule {
    std::string label = "tariff";
    std::vector<TariffSeason> seasons;

    /// Checks that each season's periods partition the 24 hours exactly and
    /// that every calendar day belongs to exactly one season. Throws ConfigError.
    void validate() const;

    double rate_at(SimTime t) const;

    /// Tariff Model 3.0 style preset: four distinct daily periods year-round,
    /// cheapest period starting at midnight, second-cheapest at 21:00.
    /// Rates are placeholders and can be overridden in the scenario config.
    static TariffSchedule tm3_default();
};

double tariff_rate_at(const TariffSchedule& schedule, SimTime t);

struct PriceComponents {
    double spot = 0.0;
    double tariff = 0.0;
    double fixed_addons = 0.0;

    double total() const { return spot + tariff + fixed_addons; }
};

PriceComponents total_price_at(const SpotPriceSeries& spot, const TariffSchedule& schedule,
                               double fixed_addons, SimTime t);

struct PricedHour {
    std::int64_t hour = 0;
    PriceComponents price;
};

/// Whole hours h with ceil(plug_in) <= h and h + 1h <= departure.
std::vector<std::int64_t> whole_hours_between(SimTime plug_in, SimTime departure);

/// Priced whole hours of the at-home window. An empty result is valid.
std::vector<PricedHour> price_horizon(const SpotPriceSeries& spot, const TariffSchedule& schedule,
                                      double fixed_addons, SimTime plug_in, SimTime departure);

} // namespace evsim
