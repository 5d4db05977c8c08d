#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evsim/inputs.hpp"

namespace evsim {

/// Residential double-peak daily profile with seasonal swing, per-household
/// scale spread and counter-based noise. Units: kW (== kWh over one hour).
struct BaseLoadShape {
    double scale_kw = 0.55;
    double household_spread = 0.35;   // log-sd of the per-household scale
    double seasonal_amplitude = 0.22; // winter high, summer low
    double weekend_uplift = 1.08;
    double noise = 0.20;              // multiplicative, fraction of the value
};

/// Day-ahead style price shape: cheap at night, peaks in the evening.
struct SpotShape {
    double mean_dkk_per_kwh = 0.45;
    double daily_amplitude = 0.28;
    double seasonal_amplitude = 0.10;
    double noise = 0.05; // additive DKK/kWh
};

/// Grid carbon intensity: cleaner at night (wind-heavy), dirtier at the peak.
struct EmissionShape {
    bool enabled = true;
    double mean_g_per_kwh = 280.0;
    double daily_amplitude = 110.0;
    double seasonal_amplitude = 45.0;
    double noise = 15.0; // additive g/kWh
};

struct SyntheticSpec {
    HorizonSpec horizon;
    int households = 126;
    BaseLoadShape base_load;
    SpotShape spot;
    EmissionShape emissions;
    std::vector<EvModel> ev_catalog; // empty = default catalog

    void validate() const;
};

std::vector<EvModel> default_ev_catalog();

/// Generator spec file (JSON): horizon, households, shape blocks, catalog.
SyntheticSpec load_synthetic_spec(const std::string& path);

BaseLoadMatrix synth_base_load(const SyntheticSpec& spec, std::uint64_t seed);
SpotPriceSeries synth_spot_prices(const SyntheticSpec& spec, std::uint64_t seed);
EmissionSeries synth_emissions(const SyntheticSpec& spec, std::uint64_t seed);

/// Full bundle: generated series plus the adoption curve and driving pattern
/// passed in (those live in the scenario, not the generator spec).
InputBundle generate_synthetic(const SyntheticSpec& spec, const AdoptionCurve& adoption,
                               const DrivingPatternSpec& driving, std::uint64_t seed);

/// Writes base_load.csv, spot_prices.csv, emissions.csv (when enabled) and
/// ev_catalog.csv into out_dir, in the exact format the ingest side reads.
void write_synthetic_csvs(const SyntheticSpec& spec, std::uint64_t seed,
                          const std::string& out_dir);

} // namespace evsim
