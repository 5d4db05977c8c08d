#include "evsim/synthetic.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <system_error>

#include "evsim/csv.hpp"
#include "evsim/errors.hpp"

namespace evsim {

namespace {

// Hour-of-day profiles. Base load: residential double peak (morning, evening).
constexpr std::array<double, 24> kBaseShape = {
    0.46, 0.42, 0.40, 0.39, 0.40, 0.44, 0.56, 0.78, 0.72, 0.62, 0.58, 0.57,
    0.60, 0.60, 0.61, 0.66, 0.82, 1.00, 1.04, 0.96, 0.86, 0.74, 0.62, 0.52,
};
// Spot price swing, zero-centered: cheapest around 03:00, dearest around 18:00.
constexpr std::array<double, 24> kSpotShape = {
    -0.72, -0.82, -0.92, -1.00, -0.95, -0.80, -0.42, 0.05, 0.28, 0.22, 0.10, 0.02,
    -0.05, -0.08, -0.02, 0.15,  0.55,  0.90,  1.00,  0.85, 0.55, 0.20, -0.15, -0.45,
};
// Carbon intensity swing: clean nights, dirty evening peak.
constexpr std::array<double, 24> kEmissionShape = {
    -0.85, -0.92, -1.00, -0.98, -0.90, -0.70, -0.30, 0.10, 0.35, 0.30, 0.20, 0.10,
    0.05,  0.00,  0.05,  0.25,  0.60,  0.95,  1.00,  0.80, 0.50, 0.15, -0.30, -0.60,
};

constexpr std::uint64_t kSaltScales = 0x5ca1ab1e0ddbaULL;
constexpr std::uint64_t kSaltBase = 0xb0a710adULL;
constexpr std::uint64_t kSaltSpot = 0x5e11e7ULL;
constexpr std::uint64_t kSaltEmission = 0xc02e9a5ULL;

double seasonal(SimTime t)
{
    const std::int64_t day_of_year = t.day_index() - SimTime::from_ymd(t.year(), 1, 1).day_index();
    return std::cos(2.0 * 3.14159265358979323846 * (static_cast<double>(day_of_year) - 15.0) / 365.25);
}

std::string format_double(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v); // shortest round-trip
    return std::string(buf, res.ptr);
}

} // namespace

void SyntheticSpec::validate() const
{
    horizon.validate();
    if (households <= 0) throw ConfigError("synthetic spec: households must be > 0");
    if (!(base_load.scale_kw > 0.0)) throw ConfigError("synthetic base_load.scale_kw must be > 0");
    if (base_load.household_spread < 0.0 || base_load.noise < 0.0 ||
        base_load.seasonal_amplitude < 0.0 || base_load.weekend_uplift <= 0.0) {
        throw ConfigError("synthetic base_load shape parameters out of range");
    }
    if (spot.noise < 0.0 || emissions.noise < 0.0) {
        throw ConfigError("synthetic noise parameters must be >= 0");
    }
    if (emissions.enabled && emissions.mean_g_per_kwh < 0.0) {
        throw ConfigError("synthetic emissions mean must be >= 0");
    }
    for (const EvModel& m : ev_catalog) m.validate();
}

std::vector<EvModel> default_ev_catalog()
{
    return {
        {"city_24", 24.0, 0.150, 3.7},
        {"compact_30", 30.0, 0.155, 3.7},
        {"sedan_40", 40.0, 0.160, 6.6},
        {"suv_62", 62.0, 0.180, 7.2},
        {"exec_75", 75.0, 0.190, 11.0},
    };
}

BaseLoadMatrix synth_base_load(const SyntheticSpec& spec, std::uint64_t seed)
{
    const BaseLoadShape& shape = spec.base_load;
    const std::size_t n = static_cast<std::size_t>(spec.households);

    Rng scale_rng(splitmix64(seed ^ kSaltScales));
    std::vector<double> hh_scale(n);
    for (std::size_t i = 0; i < n; ++i) {
        hh_scale[i] = scale_rng.lognormal(0.0, shape.household_spread);
    }

    BaseLoadMatrix matrix;
    matrix.start_hour = spec.horizon.start_hour();
    matrix.n_households = spec.households;
    matrix.kwh.resize(static_cast<std::size_t>(spec.horizon.hours()) * n);

    const std::uint64_t noise_seed = splitmix64(seed ^ kSaltBase);
    for (std::int64_t t = 0; t < spec.horizon.hours(); ++t) {
        const SimTime hb = hour_start(matrix.start_hour + t);
        const double day_component = kBaseShape[static_cast<std::size_t>(hb.hour_of_day())];
        const double season = 1.0 + shape.seasonal_amplitude * seasonal(hb);
        const double weekend = hb.is_weekend() ? shape.weekend_uplift : 1.0;
        const double common = shape.scale_kw * day_component * season * weekend;
        for (std::size_t i = 0; i < n; ++i) {
            const double noisy =
                common * hh_scale[i] *
                (1.0 + shape.noise * unit_noise(noise_seed, i, static_cast<std::uint64_t>(t)));
            matrix.kwh[static_cast<std::size_t>(t) * n + i] = std::max(0.02, noisy);
        }
    }
    return matrix;
}

SpotPriceSeries synth_spot_prices(const SyntheticSpec& spec, std::uint64_t seed)
{
    SpotPriceSeries series;
    series.name = "spot prices";
    series.start_hour = spec.horizon.start_hour();
    series.values.reserve(static_cast<std::size_t>(spec.horizon.hours()));
    const std::uint64_t noise_seed = splitmix64(seed ^ kSaltSpot);
    for (std::int64_t t = 0; t < spec.horizon.hours(); ++t) {
        const SimTime hb = hour_start(series.start_hour + t);
        const double v = spec.spot.mean_dkk_per_kwh +
                         spec.spot.daily_amplitude *
                             kSpotShape[static_cast<std::size_t>(hb.hour_of_day())] +
                         spec.spot.seasonal_amplitude * seasonal(hb) +
                         spec.spot.noise * unit_noise(noise_seed, static_cast<std::uint64_t>(t), 0);
        series.values.push_back(v);
    }
    return series;
}

EmissionSeries synth_emissions(const SyntheticSpec& spec, std::uint64_t seed)
{
    EmissionSeries series;
    series.name = "emissions";
    series.start_hour = spec.horizon.start_hour();
    series.values.reserve(static_cast<std::size_t>(spec.horizon.hours()));
    const std::uint64_t noise_seed = splitmix64(seed ^ kSaltEmission);
    for (std::int64_t t = 0; t < spec.horizon.hours(); ++t) {
        const SimTime hb = hour_start(series.start_hour + t);
        const double v =
            spec.emissions.mean_g_per_kwh +
            spec.emissions.daily_amplitude *
                kEmissionShape[static_cast<std::size_t>(hb.hour_of_day())] +
            spec.emissions.seasonal_amplitude * seasonal(hb) +
            spec.emissions.noise * unit_noise(noise_seed, static_cast<std::uint64_t>(t), 1);
        series.values.push_back(std::max(0.0, v));
    }
    return series;
}

InputBundle generate_synthetic(const SyntheticSpec& spec, const AdoptionCurve& adoption,
                               const DrivingPatternSpec& driving, std::uint64_t seed)
{
    spec.validate();
    InputBundle bundle;
    bundle.base_load = synth_base_load(spec, seed);
    bundle.spot = synth_spot_prices(spec, seed);
    if (spec.emissions.enabled) bundle.emissions = synth_emissions(spec, seed);
    bundle.ev_catalog = spec.ev_catalog.empty() ? default_ev_catalog() : spec.ev_catalog;
    bundle.adoption = adoption;
    bundle.driving = driving;
    return bundle;
}

void write_synthetic_csvs(const SyntheticSpec& spec, std::uint64_t seed, const std::string& out_dir)
{
    spec.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    const std::vector<EvModel> catalog =
        spec.ev_catalog.empty() ? default_ev_catalog() : spec.ev_catalog;

    std::string catalog_csv = "name,battery_capacity_kwh,consumption_kwh_per_km,max_charge_power_kw\n";
    for (const EvModel& m : catalog) {
        catalog_csv += m.name + ',' + format_double(m.battery_capacity_kwh) + ',' +
                       format_double(m.consumption_kwh_per_km) + ',' +
                       format_double(m.max_charge_power_kw) + '\n';
    }
    write_file_atomic(out_dir + "/ev_catalog.csv", catalog_csv);

    const SpotPriceSeries spot = synth_spot_prices(spec, seed);
    std::string spot_csv = "timestamp,dkk_per_kwh\n";
    for (std::size_t t = 0; t < spot.values.size(); ++t) {
        spot_csv += hour_iso(spot.start_hour + static_cast<std::int64_t>(t)) + ',' +
                    format_double(spot.values[t]) + '\n';
    }
    write_file_atomic(out_dir + "/spot_prices.csv", spot_csv);

    if (spec.emissions.enabled) {
        const EmissionSeries em = synth_emissions(spec, seed);
        std::string em_csv = "timestamp,gco2_per_kwh\n";
        for (std::size_t t = 0; t < em.values.size(); ++t) {
            em_csv += hour_iso(em.start_hour + static_cast<std::int64_t>(t)) + ',' +
                      format_double(em.values[t]) + '\n';
        }
        write_file_atomic(out_dir + "/emissions.csv", em_csv);
    }

    const BaseLoadMatrix base = synth_base_load(spec, seed);
    std::string base_csv = "timestamp,household_id,kwh\n";
    base_csv.reserve(static_cast<std::size_t>(base.hours()) *
                     static_cast<std::size_t>(spec.households) * 40);
    for (std::int64_t t = 0; t < base.hours(); ++t) {
        const std::string stamp = hour_iso(base.start_hour + t);
        for (int i = 0; i < spec.households; ++i) {
            base_csv += stamp + ',' + std::to_string(i) + ',' +
                        format_double(base.at(base.start_hour + t, i)) + '\n';
        }
    }
    write_file_atomic(out_dir + "/base_load.csv", base_csv);
}

} // namespace evsim
