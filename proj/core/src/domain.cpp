#include "evsim/domain.hpp"

#include <algorithm>
#include <cmath>

#include "evsim/errors.hpp"

namespace evsim {

void EvModel::validate() const
{
    if (name.empty()) {
        throw ConfigError("EV model needs a name");
    }
    if (!(battery_capacity_kwh > 0.0)) {
        throw ConfigError("EV model '" + name + "': battery_capacity_kwh must be > 0");
    }
    if (!(consumption_kwh_per_km > 0.0)) {
        throw ConfigError("EV model '" + name + "': consumption_kwh_per_km must be > 0");
    }
    if (!(max_charge_power_kw > 0.0)) {
        throw ConfigError("EV model '" + name + "': max_charge_power_kw must be > 0");
    }
}

void EvUserPreferences::validate() const
{
    if (!(desired_soc > 0.0 && desired_soc <= 1.0)) {
        throw ConfigError("desired_soc must be in (0, 1]");
    }
    if (soc_cap && !(*soc_cap > 0.0 && *soc_cap <= 1.0)) {
        throw ConfigError("soc_cap must be in (0, 1]");
    }
    if (min_soc_floor) {
        if (!(*min_soc_floor >= 0.0 && *min_soc_floor < 1.0)) {
            throw ConfigError("min_soc_floor must be in [0, 1)");
        }
        if (*min_soc_floor >= desired_soc) {
            throw ConfigError("min_soc_floor must be below desired_soc");
        }
    }
}

void Trip::validate() const
{
    if (!(departure < arrival)) {
        throw ConfigError("trip departure must precede arrival");
    }
    if (!(distance_km >= 0.0)) {
        throw ConfigError("trip distance_km must be >= 0");
    }
}

void ChargePointSpec::validate() const
{
    if (!(power_kw > 0.0)) {
        throw ConfigError("charge point power_kw must be > 0");
    }
    if (!(efficiency > 0.0 && efficiency <= 1.0)) {
        throw ConfigError("charge point efficiency must be in (0, 1]");
    }
}

ChargePointSpec effective_charger(const ChargePointSpec& box, const EvModel& model)
{
    ChargePointSpec out = box;
    out.power_kw = std::min(box.power_kw, model.max_charge_power_kw);
    return out;
}

double battery_energy(const EvModel& model, const BatteryState& state)
{
    return model.battery_capacity_kwh * state.soc;
}

double required_energy(const EvModel& model, const BatteryState& state, double target_soc)
{
    const double req = model.battery_capacity_kwh * target_soc - battery_energy(model, state);
    return std::max(0.0, req);
}

int required_charging_hours(double energy_req_kwh, const ChargePointSpec& charger)
{
    if (energy_req_kwh <= 0.0) {
        return 0;
    }
    return static_cast<int>(std::ceil(energy_req_kwh / charger.battery_side_kw()));
}

ChargeResult apply_charge(const EvModel& model, const BatteryState& state,
                          const ChargePointSpec& charger, double duration_h)
{
    ChargeResult out{state, 0.0, 0.0};
    if (duration_h <= 0.0 || state.soc >= 1.0) {
        return out;
    }
    const double headroom = model.battery_capacity_kwh * (1.0 - state.soc);
    const double offered = charger.battery_side_kw() * duration_h;
    if (offered >= headroom) {
        out.battery_gain_kwh = headroom;
        out.state.soc = 1.0;
    }
    else {
        out.battery_gain_kwh = offered;
        out.state.soc = std::min(1.0, state.soc + offered / model.battery_capacity_kwh);
    }
    out.metered_kwh = out.battery_gain_kwh / charger.efficiency;
    return out;
}

TripResult apply_trip(const EvModel& model, const BatteryState& state, const Trip& trip)
{
    TripResult out{state, 0.0};
    const double demand = trip.distance_km * model.consumption_kwh_per_km;
    const double available = battery_energy(model, state);
    if (demand > available) {
        out.consumed_kwh = available;
        out.state.soc = 0.0;
        out.state.depleted = true;
    }
    else {
        out.consumed_kwh = demand;
        out.state.soc = std::max(0.0, state.soc - demand / model.battery_capacity_kwh);
    }
    return out;
}

} // namespace evsim
