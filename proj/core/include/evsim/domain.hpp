#pragma once

#include <optional>
#include <string>

#include "evsim/time.hpp"

namespace evsim {

struct EvModel {
    std::string name;
    double battery_capacity_kwh = 0.0;
    double consumption_kwh_per_km = 0.0;
    double max_charge_power_kw = 0.0;

    void validate() const; // throws ConfigError
};

/// State-of-charge as a fraction of capacity, always kept in [0, 1].
/// `depleted` records that a trip demanded more energy than was on board.
struct BatteryState {
    double soc = 0.0;
    bool depleted = false;
};

struct EvUserPreferences {
    double desired_soc = 1.0;
    std::optional<double> soc_cap;       // "max SoC" variant
    std::optional<double> min_soc_floor; // "min SoC" variant
    bool distance_optimization = false;

    void validate() const;
};

struct Trip {
    SimTime departure;
    SimTime arrival;
    double distance_km = 0.0;

    void validate() const;
};

struct ChargePointSpec {
    double power_kw = 3.7;
    double efficiency = 0.84; // grid-side power in, battery-side power out

    double battery_side_kw() const { return power_kw * efficiency; }
    void validate() const;
};

/// Charger as the EV sees it: box power capped by the vehicle's own limit.
ChargePointSpec effective_charger(const ChargePointSpec& box, const EvModel& model);

/// Energy currently on the battery (kWh).
double battery_energy(const EvModel& model, const BatteryState& state);

/// Battery-side energy needed to lift the SoC to `target_soc`, clamped at 0
/// when the target is already met (no discharging).
double required_energy(const EvModel& model, const BatteryState& state, double target_soc);

/// Whole charging hours needed for `energy_req_kwh`, rounded up.
int required_charging_hours(double energy_req_kwh, const ChargePointSpec& charger);

struct ChargeResult {
    BatteryState state;
    double metered_kwh = 0.0;      // grid-side energy, what the meter bills
    double battery_gain_kwh = 0.0; // battery-side energy actually stored
};

/// Charge for `duration_h` hours at full charger power, clamped at a full
/// battery. The meter sees the grid side; the battery receives power × η.
ChargeResult apply_charge(const EvModel& model, const BatteryState& state,
                          const ChargePointSpec& charger, double duration_h);

struct TripResult {
    BatteryState state;
    double consumed_kwh = 0.0; // demand clipped at the energy that was on board
};

/// Drain the battery for a driven trip; SoC floors at 0 and the depleted flag
/// is set when the trip demanded more than was available.
TripResult apply_trip(const EvModel& model, const BatteryState& state, const Trip& trip);

} // namespace evsim
