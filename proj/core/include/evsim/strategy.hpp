#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evsim/domain.hpp"
#include "evsim/pricing.hpp"
#include "evsim/time.hpp"

namespace evsim {

enum class StrategyKind {
    Traditional, // charge continuously from plug-in until target or departure
    Rtp,         // pick the cheapest hours by total spot-based price
    Tou,         // pick the cheapest hours by tariff rate
};

std::string strategy_label(StrategyKind kind);
StrategyKind parse_strategy_kind(const std::string& label); // throws ConfigError

struct StrategyOptions {
    StrategyKind kind = StrategyKind::Traditional;
    /// When true, the partial arrival and departure hours are offered to the
    /// scheduler as fractional slots. Off by default: only whole at-home hours
    /// are scheduled.
    bool use_partial_hours = false;
    /// When true, an EV still below target after its last scheduled slot keeps
    /// charging price-blind until departure.
    bool fallback_charging = true;
};

/// Target state of charge for one plug-in session: the desired level, capped
/// by soc_cap when set; the distance optimizer instead targets next-trip
/// demand plus the reserve floor; the floor always bounds the result below.
double effective_target_soc(const EvUserPreferences& prefs, const EvModel& model,
                            std::optional<double> next_trip_km);

struct ChargeRequest {
    SimTime plug_in;
    SimTime departure;
    BatteryState state;
    EvModel model;
    ChargePointSpec charger;
    EvUserPreferences prefs;
    std::optional<double> next_trip_km;
};

/// One schedulable charging interval inside hour `hour`, covering
/// [hour + start_offset_h, hour + start_offset_h + duration_h).
struct ScheduleSlot {
    std::int64_t hour = 0;
    double start_offset_h = 0.0;
    double duration_h = 1.0;
};

struct PricedSlot {
    ScheduleSlot slot;
    double price = 0.0; // DKK/kWh applied to the whole slot
};

/// Cost-minimal selection: slots sorted by (price, time), accumulated until
/// `needed_hours` is covered; the final slot is truncated to the remainder.
/// Returns the chosen slots in time order.
std::vector<ScheduleSlot> select_cheapest(std::vector<PricedSlot> candidates, double needed_hours);

struct ChargingSchedule {
    StrategyKind kind = StrategyKind::Traditional;
    SimTime plug_in;
    SimTime departure;
    double target_soc = 1.0;
    bool continuous = false;           // traditional: charge whenever plugged
    std::vector<ScheduleSlot> slots;   // time-ordered; empty when continuous

    double scheduled_hours() const;
};

ChargingSchedule traditional_schedule(const ChargeRequest& req);
ChargingSchedule rtp_schedule(const ChargeRequest& req, const StrategyOptions& options,
                              const SpotPriceSeries& spot, const TariffSchedule& tariff,
                              double fixed_addons);
ChargingSchedule tou_schedule(const ChargeRequest& req, const StrategyOptions& options,
                              const TariffSchedule& tariff);

ChargingSchedule build_schedule(const ChargeRequest& req, const StrategyOptions& options,
                                const SpotPriceSeries& spot, const TariffSchedule& tariff,
                                double fixed_addons);

enum class ActionKind {
    None,   // target reached or not plugged in during this hour
    Idle,   // plugged in, waiting for a cheaper slot
    Charge, // draw power for duration_h within this hour
};

struct ChargingAction {
    ActionKind kind = ActionKind::None;
    double duration_h = 0.0;
};

/// Decides what the box does during [hour, hour + 1) for a plugged-in EV.
ChargingAction next_action(const ChargingSchedule& schedule, const EvModel& model,
                           const ChargePointSpec& charger, const StrategyOptions& options,
                           const BatteryState& state, std::int64_t hour);

} // namespace evsim
