#include "evsim/strategy.hpp"

#include <algorithm>
#include <cmath>

#include "evsim/errors.hpp"

namespace evsim {

namespace {

constexpr double kEps = 1e-12;

double hours_between(SimTime a, SimTime b)
{
    return static_cast<double>(b.minutes() - a.minutes()) / 60.0;
}

/// Slots covering [plug_in, departure), split at hour marks. Whole-hour mode
/// drops the partial lead-in and tail; fractional mode keeps them.
std::vector<ScheduleSlot> candidate_slots(SimTime plug_in, SimTime departure, bool use_partial_hours)
{
    std::vector<ScheduleSlot> slots;
    if (!(plug_in < departure)) return slots;
    if (!use_partial_hours) {
        for (std::int64_t h : whole_hours_between(plug_in, departure)) {
            slots.push_back(ScheduleSlot{h, 0.0, 1.0});
        }
        return slots;
    }
    SimTime cursor = plug_in;
    while (cursor < departure) {
        const SimTime hour_end = cursor.floor_hour().plus_hours(1);
        const SimTime slot_end = hour_end < departure ? hour_end : departure;
        ScheduleSlot s;
        s.hour = cursor.floor_hour().hour_index();
        s.start_offset_h = static_cast<double>(cursor.minute_of_hour()) / 60.0;
        s.duration_h = hours_between(cursor, slot_end);
        if (s.duration_h > kEps) slots.push_back(s);
        cursor = slot_end;
    }
    return slots;
}

/// Charging hours the session plans for: whole hours rounded up by default,
/// the exact fraction when partial hours are in play.
double planned_hours(const ChargeRequest& req, double target_soc, const StrategyOptions& options)
{
    const ChargePointSpec charger = effective_charger(req.charger, req.model);
    const double energy = required_energy(req.model, req.state, target_soc);
    if (energy <= kEps) return 0.0;
    if (options.use_partial_hours) return energy / charger.battery_side_kw();
    return static_cast<double>(required_charging_hours(energy, charger));
}

ChargingSchedule schedule_shell(const ChargeRequest& req, StrategyKind kind)
{
    ChargingSchedule sched;
    sched.kind = kind;
    sched.plug_in = req.plug_in;
    sched.departure = req.departure;
    sched.target_soc = effective_target_soc(req.prefs, req.model, req.next_trip_km);
    return sched;
}

} // namespace

std::string strategy_label(StrategyKind kind)
{
    switch (kind) {
    case StrategyKind::Traditional: return "traditional";
    case StrategyKind::Rtp: return "rtp";
    case StrategyKind::Tou: return "tou";
    }
    throw InternalError("unknown strategy kind");
}

StrategyKind parse_strategy_kind(const std::string& label)
{
    if (label == "traditional") return StrategyKind::Traditional;
    if (label == "rtp") return StrategyKind::Rtp;
    if (label == "tou") return StrategyKind::Tou;
    throw ConfigError("unknown charging strategy '" + label + "' (expected traditional, rtp or tou)");
}

double effective_target_soc(const EvUserPreferences& prefs, const EvModel& model,
                            std::optional<double> next_trip_km)
{
    double target = prefs.desired_soc;
    if (prefs.soc_cap) target = std::min(target, *prefs.soc_cap);
    if (prefs.distance_optimization && next_trip_km) {
        const double reserve = prefs.min_soc_floor.value_or(0.0);
        const double trip_soc = (*next_trip_km * model.consumption_kwh_per_km) / model.battery_capacity_kwh;
        target = std::clamp(trip_soc + reserve, reserve, 1.0);
    }
    if (prefs.min_soc_floor) target = std::max(target, *prefs.min_soc_floor);
    return std::clamp(target, 0.0, 1.0);
}

std::vector<ScheduleSlot> select_cheapest(std::vector<PricedSlot> candidates, double needed_hours)
{
    std::vector<ScheduleSlot> chosen;
    if (needed_hours <= kEps) return chosen;
    std::stable_sort(candidates.begin(), candidates.end(), [](const PricedSlot& a, const PricedSlot& b) {
        if (a.price != b.price) return a.price < b.price;
        if (a.slot.hour != b.slot.hour) return a.slot.hour < b.slot.hour;
        return a.slot.start_offset_h < b.slot.start_offset_h;
    });
    double remaining = needed_hours;
    for (const PricedSlot& ps : candidates) {
        if (remaining <= kEps) break;
        ScheduleSlot s = ps.slot;
        if (s.duration_h > remaining) s.duration_h = remaining;
        chosen.push_back(s);
        remaining -= s.duration_h;
    }
    std::sort(chosen.begin(), chosen.end(), [](const ScheduleSlot& a, const ScheduleSlot& b) {
        if (a.hour != b.hour) return a.hour < b.hour;
        return a.start_offset_h < b.start_offset_h;
    });
    return chosen;
}

double ChargingSchedule::scheduled_hours() const
{
    double total = 0.0;
    for (const ScheduleSlot& s : slots) total += s.duration_h;
    return total;
}

ChargingSchedule traditional_schedule(const ChargeRequest& req)
{
    ChargingSchedule sched = schedule_shell(req, StrategyKind::Traditional);
    sched.continuous = true;
    return sched;
}

ChargingSchedule rtp_schedule(const ChargeRequest& req, const StrategyOptions& options,
                              const SpotPriceSeries& spot, const TariffSchedule& tariff,
                              double fixed_addons)
{
    ChargingSchedule sched = schedule_shell(req, StrategyKind::Rtp);
    const double needed = planned_hours(req, sched.target_soc, options);
    std::vector<PricedSlot> candidates;
    for (const ScheduleSlot& s : candidate_slots(req.plug_in, req.departure, options.use_partial_hours)) {
        const PriceComponents pc = total_price_at(spot, tariff, fixed_addons, hour_start(s.hour));
        candidates.push_back(PricedSlot{s, pc.total()});
    }
    sched.slots = select_cheapest(std::move(candidates), needed);
    return sched;
}

ChargingSchedule tou_schedule(const ChargeRequest& req, const StrategyOptions& options,
                              const TariffSchedule& tariff)
{
    ChargingSchedule sched = schedule_shell(req, StrategyKind::Tou);
    const double needed = planned_hours(req, sched.target_soc, options);
    std::vector<PricedSlot> candidates;
    for (const ScheduleSlot& s : candidate_slots(req.plug_in, req.departure, options.use_partial_hours)) {
        candidates.push_back(PricedSlot{s, tariff.rate_at(hour_start(s.hour))});
    }
    sched.slots = select_cheapest(std::move(candidates), needed);
    return sched;
}

ChargingSchedule build_schedule(const ChargeRequest& req, const StrategyOptions& options,
                                const SpotPriceSeries& spot, const TariffSchedule& tariff,
                                double fixed_addons)
{
    switch (options.kind) {
    case StrategyKind::Traditional: return traditional_schedule(req);
    case StrategyKind::Rtp: return rtp_schedule(req, options, spot, tariff, fixed_addons);
    case StrategyKind::Tou: return tou_schedule(req, options, tariff);
    }
    throw InternalError("unknown strategy kind");
}

ChargingAction next_action(const ChargingSchedule& schedule, const EvModel& model,
                           const ChargePointSpec& charger, const StrategyOptions& options,
                           const BatteryState& state, std::int64_t hour)
{
    const ChargePointSpec eff = effective_charger(charger, model);
    const double needed_h = required_energy(model, state, schedule.target_soc) / eff.battery_side_kw();
    if (needed_h <= kEps) return {ActionKind::None, 0.0};

    // All windows in fractional hours since epoch; minute inputs stay exact.
    const double hb = static_cast<double>(hour);
    const double pl = static_cast<double>(schedule.plug_in.minutes()) / 60.0;
    const double dep = static_cast<double>(schedule.departure.minutes()) / 60.0;
    if (dep <= hb || pl >= hb + 1.0) return {ActionKind::None, 0.0};

    const auto overlap = [&](double lo, double hi) {
        const double a = std::max({lo, hb, pl});
        const double b = std::min({hi, hb + 1.0, dep});
        return std::max(0.0, b - a);
    };

    if (schedule.continuous) {
        const double d = std::min(overlap(pl, dep), needed_h);
        if (d > kEps) return {ActionKind::Charge, d};
        return {ActionKind::Idle, 0.0};
    }

    bool has_future_slot = false;
    for (const ScheduleSlot& s : schedule.slots) {
        if (s.hour > hour) {
            has_future_slot = true;
            continue;
        }
        if (s.hour != hour) continue;
        const double lo = static_cast<double>(s.hour) + s.start_offset_h;
        const double d = std::min(overlap(lo, lo + s.duration_h), needed_h);
        if (d > kEps) return {ActionKind::Charge, d};
    }
    if (has_future_slot) return {ActionKind::Idle, 0.0};

    // Past the last slot (or never had one) and still short of target: charge
    // price-blind until departure unless the fallback is disabled.
    if (options.fallback_charging) {
        const double d = std::min(overlap(pl, dep), needed_h);
        if (d > kEps) return {ActionKind::Charge, d};
    }
    return {ActionKind::Idle, 0.0};
}

} // namespace evsim
