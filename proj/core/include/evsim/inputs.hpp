#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evsim/domain.hpp"
#include "evsim/pricing.hpp"
#include "evsim/rng.hpp"
#include "evsim/time.hpp"

namespace evsim {

/// Simulated span [start, end), both midnight-aligned.
struct HorizonSpec {
    SimTime start;
    SimTime end;

    std::int64_t start_hour() const { return start.hour_index(); }
    std::int64_t end_hour() const { return end.hour_index(); }
    std::int64_t hours() const { return end_hour() - start_hour(); }
    std::int64_t days() const { return hours() / kHoursPerDay; }
    void validate() const; // throws ConfigError
};

/// Hour-major per-household base consumption, kWh per hour.
struct BaseLoadMatrix {
    std::int64_t start_hour = 0;
    int n_households = 0;
    std::vector<double> kwh;

    std::int64_t hours() const
    {
        return n_households == 0 ? 0 : static_cast<std::int64_t>(kwh.size()) / n_households;
    }
    double at(std::int64_t hour, int household) const
    {
        return kwh[static_cast<std::size_t>(hour - start_hour) * static_cast<std::size_t>(n_households) +
                   static_cast<std::size_t>(household)];
    }
    bool covers(std::int64_t first_hour, std::int64_t end_hour_excl) const
    {
        return first_hour >= start_hour && end_hour_excl <= start_hour + hours();
    }
};

/// Cumulative EV ownership target per month, anchored at the horizon start
/// month; model mix gives the sampling weights for new adoptions.
struct AdoptionCurve {
    std::int64_t start_month = 0;
    std::vector<int> cumulative;
    std::vector<double> model_weights;

    int target_at(std::int64_t month_index) const;
    void validate(int n_households, std::size_t n_models) const;
};

struct SampleDist {
    enum class Kind { Point, Uniform, Normal, LogNormal };
    Kind kind = Kind::Point;
    double a = 0.0; // point value / uniform lo / normal mean / lognormal log-mean
    double b = 0.0; // uniform hi / normal sd / lognormal log-sd
    double lo = -1e300; // truncation bounds, enforced by resampling
    double hi = 1e300;

    double sample(Rng& rng) const; // throws ConfigError when bounds are unsatisfiable
    void validate(const std::string& what) const;
};

struct DayPattern {
    SampleDist departure_minutes; // minutes after midnight
    SampleDist arrival_minutes;
    SampleDist distance_km;
};

struct DrivingPatternSpec {
    DayPattern weekday;
    DayPattern weekend;

    void validate() const;
    static DrivingPatternSpec commuter_default();
};

/// One home-away window on the given day; resampled until the departure and
/// arrival leave room for the hourly plug cycle (arrival hour follows the
/// departure's wall-clock hour).
Trip sample_daily_trip(const DrivingPatternSpec& spec, Rng& rng, SimTime day_start);

struct InputBundle {
    BaseLoadMatrix base_load;
    SpotPriceSeries spot;
    std::optional<EmissionSeries> emissions;
    std::vector<EvModel> ev_catalog;
    AdoptionCurve adoption;
    DrivingPatternSpec driving;

    void validate(const HorizonSpec& horizon, int households) const; // throws
};

std::vector<EvModel> load_ev_catalog(const std::string& path);

/// Reads `timestamp,<value_column>` hourly rows; checks contiguity and
/// coverage. With repeat_years, a whole-day source is tiled cyclically over
/// the horizon instead of having to cover it.
HourlySeries load_hourly_series(const std::string& path, const std::string& value_column,
                                const std::string& series_name, bool repeat_years,
                                const HorizonSpec& horizon, bool allow_negative);

/// Reads `timestamp,household_id,kwh` rows sorted by (timestamp, household);
/// household ids run 0..households-1 and every hour lists each household once.
BaseLoadMatrix load_base_load(const std::string& path, int households, bool repeat_years,
                              const HorizonSpec& horizon);

} // namespace evsim
