#include "evsim/inputs.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "evsim/csv.hpp"
#include "evsim/errors.hpp"

namespace evsim {

void HorizonSpec::validate() const
{
    if (!(start < end)) {
        throw ConfigError("sim_end must be after sim_start (got sim_start " + start.iso() +
                          ", sim_end " + end.iso() + ")");
    }
    if (start != start.floor_day() || end != end.floor_day()) {
        throw ConfigError("sim_start and sim_end must be midnight-aligned");
    }
}

int AdoptionCurve::target_at(std::int64_t month_index) const
{
    if (cumulative.empty()) return 0;
    if (month_index < start_month) return 0;
    const std::size_t i = static_cast<std::size_t>(month_index - start_month);
    if (i >= cumulative.size()) return cumulative.back();
    return cumulative[i];
}

void AdoptionCurve::validate(int n_households, std::size_t n_models) const
{
    int prev = 0;
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
        if (cumulative[i] < prev) {
            throw ConfigError("adoption curve must be non-decreasing (month " + std::to_string(i) +
                              ")");
        }
        prev = cumulative[i];
    }
    if (prev > n_households) {
        throw ConfigError("adoption curve targets " + std::to_string(prev) + " EVs but only " +
                          std::to_string(n_households) + " households exist");
    }
    if (model_weights.size() != n_models) {
        throw ConfigError("adoption model mix lists " + std::to_string(model_weights.size()) +
                          " weights for " + std::to_string(n_models) + " catalog models");
    }
    double sum = 0.0;
    for (double w : model_weights) {
        if (w < 0.0) throw ConfigError("adoption model weights must be >= 0");
        sum += w;
    }
    if (prev > 0 && sum <= 0.0) throw ConfigError("adoption model weights sum to zero");
}

void SampleDist::validate(const std::string& what) const
{
    if (lo > hi) throw ConfigError(what + ": empty truncation range");
    switch (kind) {
    case Kind::Point:
        if (a < lo || a > hi) throw ConfigError(what + ": point value outside its bounds");
        break;
    case Kind::Uniform:
        if (!(a <= b)) throw ConfigError(what + ": uniform needs lo <= hi");
        if (b < lo || a > hi) throw ConfigError(what + ": uniform range outside its bounds");
        break;
    case Kind::Normal:
        if (!(b >= 0.0)) throw ConfigError(what + ": normal needs sd >= 0");
        break;
    case Kind::LogNormal:
        if (!(b >= 0.0)) throw ConfigError(what + ": lognormal needs log-sd >= 0");
        if (hi < 0.0) throw ConfigError(what + ": lognormal is positive but bounds are negative");
        break;
    }
}

double SampleDist::sample(Rng& rng) const
{
    constexpr int kMaxAttempts = 10000;
    for (int i = 0; i < kMaxAttempts; ++i) {
        double v = 0.0;
        switch (kind) {
        case Kind::Point: v = a; break;
        case Kind::Uniform: v = a + (b - a) * rng.uniform01(); break;
        case Kind::Normal: v = rng.normal(a, b); break;
        case Kind::LogNormal: v = rng.lognormal(a, b); break;
        }
        if (v >= lo && v <= hi) return v;
    }
    throw ConfigError("distribution truncation bounds rejected " + std::to_string(kMaxAttempts) +
                      " consecutive samples");
}

void DrivingPatternSpec::validate() const
{
    const DayPattern* patterns[] = {&weekday, &weekend};
    const char* names[] = {"weekday", "weekend"};
    for (int i = 0; i < 2; ++i) {
        patterns[i]->departure_minutes.validate(std::string(names[i]) + " departure_minutes");
        patterns[i]->arrival_minutes.validate(std::string(names[i]) + " arrival_minutes");
        patterns[i]->distance_km.validate(std::string(names[i]) + " distance_km");
    }
}

DrivingPatternSpec DrivingPatternSpec::commuter_default()
{
    DrivingPatternSpec spec;
    spec.weekday.departure_minutes = {SampleDist::Kind::Normal, 450.0, 40.0, 300.0, 600.0};
    spec.weekday.arrival_minutes = {SampleDist::Kind::Normal, 1005.0, 60.0, 780.0, 1260.0};
    spec.weekday.distance_km = {SampleDist::Kind::LogNormal, 3.5553, 0.50, 2.0, 300.0};
    spec.weekend.departure_minutes = {SampleDist::Kind::Normal, 600.0, 90.0, 420.0, 840.0};
    spec.weekend.arrival_minutes = {SampleDist::Kind::Normal, 930.0, 110.0, 720.0, 1305.0};
    spec.weekend.distance_km = {SampleDist::Kind::LogNormal, 3.2189, 0.70, 1.0, 300.0};
    return spec;
}

Trip sample_daily_trip(const DrivingPatternSpec& spec, Rng& rng, SimTime day_start)
{
    const DayPattern& pattern = day_start.is_weekend() ? spec.weekend : spec.weekday;
    constexpr int kMaxAttempts = 10000;
    for (int i = 0; i < kMaxAttempts; ++i) {
        const std::int64_t dep_min = std::llround(pattern.departure_minutes.sample(rng));
        const std::int64_t arr_min = std::llround(pattern.arrival_minutes.sample(rng));
        if (dep_min < 0 || arr_min >= kMinutesPerDay) continue;
        const SimTime departure = day_start.plus_minutes(dep_min);
        const SimTime arrival = day_start.plus_minutes(arr_min);
        if (!(departure < arrival)) continue;
        // The away window must span the departure's hour boundary so the
        // unplug (ceil of departure) never lands after the arrival's hour.
        if (arrival.floor_hour() < departure.ceil_hour()) continue;
        Trip trip{departure, arrival, std::max(0.0, pattern.distance_km.sample(rng))};
        trip.validate();
        return trip;
    }
    throw ConfigError("driving pattern cannot produce a departure-before-arrival day window");
}

void InputBundle::validate(const HorizonSpec& horizon, int households) const
{
    if (base_load.n_households != households) {
        throw ConfigError("base load covers " + std::to_string(base_load.n_households) +
                          " households, scenario has " + std::to_string(households));
    }
    if (!base_load.covers(horizon.start_hour(), horizon.end_hour())) {
        throw DataError("base load series does not cover the simulation horizon");
    }
    if (!spot.covers(horizon.start_hour(), horizon.end_hour())) {
        throw DataError(spot.name + ": does not cover the simulation horizon");
    }
    if (emissions && !emissions->covers(horizon.start_hour(), horizon.end_hour())) {
        throw DataError(emissions->name + ": does not cover the simulation horizon");
    }
    if (ev_catalog.empty()) throw ConfigError("EV catalog is empty");
    std::set<std::string> names;
    for (const EvModel& m : ev_catalog) {
        m.validate();
        if (!names.insert(m.name).second) {
            throw ConfigError("EV catalog has duplicate model '" + m.name + "'");
        }
    }
    adoption.validate(households, ev_catalog.size());
    driving.validate();
    for (double v : spot.values) {
        if (!std::isfinite(v)) throw DataError(spot.name + ": non-finite price");
    }
    if (emissions) {
        for (double v : emissions->values) {
            if (!(v >= 0.0)) throw DataError(emissions->name + ": intensity must be >= 0");
        }
    }
}

std::vector<EvModel> load_ev_catalog(const std::string& path)
{
    const CsvTable table = read_csv(
        path, {"name", "battery_capacity_kwh", "consumption_kwh_per_km", "max_charge_power_kw"});
    std::vector<EvModel> catalog;
    std::set<std::string> names;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        EvModel m;
        m.name = table.rows[r][0];
        m.battery_capacity_kwh = csv_double(table, r, 1);
        m.consumption_kwh_per_km = csv_double(table, r, 2);
        m.max_charge_power_kw = csv_double(table, r, 3);
        try {
            m.validate();
        }
        catch (const ConfigError& e) {
            csv_fail(table, r, e.what());
        }
        if (!names.insert(m.name).second) csv_fail(table, r, "duplicate model '" + m.name + "'");
        catalog.push_back(std::move(m));
    }
    return catalog;
}

namespace {

/// Checks hourly spacing and returns the contiguous source values.
void check_contiguous(const CsvTable& table, const std::vector<std::int64_t>& hours)
{
    for (std::size_t r = 1; r < hours.size(); ++r) {
        const std::int64_t gap = hours[r] - hours[r - 1];
        if (gap == 0) csv_fail(table, r, "duplicate timestamp " + hour_iso(hours[r]));
        if (gap < 0) csv_fail(table, r, "timestamps not ascending at " + hour_iso(hours[r]));
        if (gap > 1) {
            csv_fail(table, r, "gap before " + hour_iso(hours[r]) + ": missing hour " +
                                   hour_iso(hours[r - 1] + 1));
        }
    }
}

/// Slices or cyclically tiles a contiguous source onto the horizon.
std::vector<double> fit_to_horizon(const std::string& name, std::int64_t src_start,
                                   const std::vector<double>& src, bool repeat_years,
                                   const HorizonSpec& horizon)
{
    const std::int64_t want_start = horizon.start_hour();
    const std::int64_t want_hours = horizon.hours();
    const std::int64_t len = static_cast<std::int64_t>(src.size());

    if (src_start <= want_start && src_start + len >= want_start + want_hours) {
        const std::size_t off = static_cast<std::size_t>(want_start - src_start);
        return std::vector<double>(src.begin() + static_cast<std::ptrdiff_t>(off),
                                   src.begin() + static_cast<std::ptrdiff_t>(off + want_hours));
    }
    if (!repeat_years) {
        const std::int64_t missing =
            src_start > want_start ? want_start : src_start + len; // first uncovered hour
        throw DataError(name + ": does not cover the horizon (missing hour " + hour_iso(missing) +
                        "); set repeat_years to tile a shorter source");
    }
    if (len % kHoursPerDay != 0) {
        throw DataError(name + ": repeat_years needs a whole-day source, got " + std::to_string(len) +
                        " hours");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(want_hours));
    for (std::int64_t t = 0; t < want_hours; ++t) {
        const std::int64_t rel = (want_start + t - src_start) % len;
        out.push_back(src[static_cast<std::size_t>(rel < 0 ? rel + len : rel)]);
    }
    return out;
}

} // namespace

HourlySeries load_hourly_series(const std::string& path, const std::string& value_column,
                                const std::string& series_name, bool repeat_years,
                                const HorizonSpec& horizon, bool allow_negative)
{
    const CsvTable table = read_csv(path, {"timestamp", value_column});
    std::vector<std::int64_t> hours;
    std::vector<double> values;
    hours.reserve(table.rows.size());
    values.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const SimTime t = csv_timestamp(table, r, 0);
        if (!t.on_hour()) csv_fail(table, r, "timestamp must be on the hour: " + t.iso());
        const double v = csv_double(table, r, 1);
        if (!allow_negative && v < 0.0) {
            csv_fail(table, r, "column '" + value_column + "' must be >= 0");
        }
        hours.push_back(t.hour_index());
        values.push_back(v);
    }
    check_contiguous(table, hours);

    HourlySeries series;
    series.name = series_name;
    series.start_hour = horizon.start_hour();
    series.values = fit_to_horizon(series_name + " (" + path + ")", hours.front(), values,
                                   repeat_years, horizon);
    return series;
}

BaseLoadMatrix load_base_load(const std::string& path, int households, bool repeat_years,
                              const HorizonSpec& horizon)
{
    const CsvTable table = read_csv(path, {"timestamp", "household_id", "kwh"});
    const std::size_t n = static_cast<std::size_t>(households);
    if (table.rows.size() % n != 0) {
        throw DataError(path + ": row count " + std::to_string(table.rows.size()) +
                        " is not a multiple of " + std::to_string(households) + " households");
    }
    const std::size_t src_hours = table.rows.size() / n;
    std::vector<double> src(table.rows.size());
    std::vector<std::int64_t> hours(src_hours);

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::size_t hour_block = r / n;
        const std::size_t pos_in_block = r % n;
        const SimTime t = csv_timestamp(table, r, 0);
        if (!t.on_hour()) csv_fail(table, r, "timestamp must be on the hour: " + t.iso());
        if (pos_in_block == 0) {
            hours[hour_block] = t.hour_index();
        }
        else if (t.hour_index() != hours[hour_block]) {
            csv_fail(table, r, "expected timestamp " + hour_iso(hours[hour_block]) +
                                   " (rows are grouped per hour, households 0.." +
                                   std::to_string(households - 1) + ")");
        }
        const std::int64_t id = csv_int(table, r, 1);
        if (id != static_cast<std::int64_t>(pos_in_block)) {
            csv_fail(table, r, "expected household_id " + std::to_string(pos_in_block) + ", got " +
                                   std::to_string(id));
        }
        const double v = csv_double(table, r, 2);
        if (v < 0.0) csv_fail(table, r, "kwh must be >= 0");
        src[hour_block * n + pos_in_block] = v;
    }
    // Contiguity over hour blocks, reported at the first row of the block.
    for (std::size_t b = 1; b < src_hours; ++b) {
        const std::int64_t gap = hours[b] - hours[b - 1];
        if (gap != 1) {
            csv_fail(table, b * n, gap <= 0 ? "timestamps not ascending"
                                            : "gap: missing hour " + hour_iso(hours[b - 1] + 1));
        }
    }

    BaseLoadMatrix matrix;
    matrix.start_hour = horizon.start_hour();
    matrix.n_households = households;

    // Tile hour-blocks the same way plain series are tiled.
    const std::int64_t want_hours = horizon.hours();
    const std::int64_t len = static_cast<std::int64_t>(src_hours);
    const std::int64_t src_start = hours.front();
    matrix.kwh.reserve(static_cast<std::size_t>(want_hours) * n);
    if (src_start <= horizon.start_hour() && src_start + len >= horizon.end_hour()) {
        const std::size_t off = static_cast<std::size_t>(horizon.start_hour() - src_start);
        matrix.kwh.assign(src.begin() + static_cast<std::ptrdiff_t>(off * n),
                          src.begin() + static_cast<std::ptrdiff_t>((off + want_hours) * n));
        return matrix;
    }
    if (!repeat_years) {
        throw DataError(path + ": does not cover the horizon; set repeat_years to tile");
    }
    if (len % kHoursPerDay != 0) {
        throw DataError(path + ": repeat_years needs a whole-day source, got " + std::to_string(len) +
                        " hours");
    }
    for (std::int64_t t = 0; t < want_hours; ++t) {
        std::int64_t rel = (horizon.start_hour() + t - src_start) % len;
        if (rel < 0) rel += len;
        const std::size_t base = static_cast<std::size_t>(rel) * n;
        matrix.kwh.insert(matrix.kwh.end(), src.begin() + static_cast<std::ptrdiff_t>(base),
                          src.begin() + static_cast<std::ptrdiff_t>(base + n));
    }
    return matrix;
}

} // namespace evsim
