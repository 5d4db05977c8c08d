#include "evsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "evsim/errors.hpp"
#include "evsim/strategy.hpp"

namespace evsim {

namespace {

constexpr double kEnergyEps = 1e-9;

/// All schedule requests go through one provider, which owns the price view.
class ChargingServiceProvider {
public:
    ChargingServiceProvider(const SpotPriceSeries& spot, const TariffSchedule& tariff, double addons,
                            const StrategyOptions& options, MessageCounters& counters)
        : m_spot(spot), m_tariff(tariff), m_addons(addons), m_options(options), m_counters(counters)
    {
    }

    ChargingSchedule request_schedule(const ChargeRequest& req)
    {
        ++m_counters.schedule_requests;
        ChargingSchedule schedule = build_schedule(req, m_options, m_spot, m_tariff, m_addons);
        ++m_counters.schedule_responses;
        return schedule;
    }

private:
    const SpotPriceSeries& m_spot;
    const TariffSchedule& m_tariff;
    double m_addons;
    StrategyOptions m_options;
    MessageCounters& m_counters;
};

struct EvUnit {
    int household = -1;
    int model_idx = -1;
    BatteryState state;
    bool away = false;
    bool plugged = false;
    Trip pending;          // the next (or current, when away) trip
    std::int64_t unplug_hour = -1;
    ChargingSchedule schedule;
    bool has_schedule = false;
};

class Simulation {
public:
    Simulation(const ScenarioConfig& config, const InputBundle& inputs)
        : m_config(config),
          m_inputs(inputs),
          m_rng(config.seed),
          m_provider(inputs.spot, config.tariff, config.fixed_addons_dkk_per_kwh,
                     config.strategy.options, m_result.messages)
    {
    }

    SimulationResult take()
    {
        const HorizonSpec& horizon = m_config.horizon;
        const int n = m_config.households;
        const std::size_t hours = static_cast<std::size_t>(horizon.hours());
        const std::size_t days = static_cast<std::size_t>(horizon.days());

        m_result.horizon = horizon;
        m_result.households = n;
        m_result.capacity_kw = m_config.transformer_capacity_kw;
        m_result.seed = m_config.seed;
        m_result.emissions_present = m_inputs.emissions.has_value();
        m_result.ledgers.resize(static_cast<std::size_t>(n));
        m_result.day_peak_kw.assign(days, 0.0);
        m_result.day_household_peak_sum_kw.assign(days, 0.0);
        m_result.traced = m_config.trace_households;
        if (m_result.traced) {
            m_result.trace_metered_kwh.assign(hours * static_cast<std::size_t>(n), 0.0);
        }

        SystemSeries& s = m_result.series;
        s.start_hour = horizon.start_hour();
        s.total_kw.assign(hours, 0.0);
        s.base_kw.assign(hours, 0.0);
        s.ev_kw.assign(hours, 0.0);
        s.billed_dkk.assign(hours, 0.0);
        s.billed_ev_owners_dkk.assign(hours, 0.0);
        s.dso_tariff_dkk.assign(hours, 0.0);
        s.ev_cost_dkk.assign(hours, 0.0);
        s.ev_metered_kwh.assign(hours, 0.0);
        s.co2_g.assign(hours, 0.0);
        s.household_peak_sum_kw.assign(hours, 0.0);
        s.plugged_evs.assign(hours, 0);
        s.owned_evs.assign(hours, 0);

        m_non_owners.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) m_non_owners[static_cast<std::size_t>(i)] = i;
        m_evm.assign(static_cast<std::size_t>(n), 0.0);
        m_peak_today.assign(static_cast<std::size_t>(n), 0.0);

        for (std::size_t t = 0; t < hours; ++t) step_hour(static_cast<std::int64_t>(t));

        for (const EvUnit& ev : m_evs) {
            m_result.ledgers[static_cast<std::size_t>(ev.household)].final_soc = ev.state.soc;
        }
        return std::move(m_result);
    }

private:
    void step_hour(std::int64_t t)
    {
        const std::int64_t h = m_result.series.start_hour + t;
        const SimTime hb = hour_start(h);
        const int hod = hb.hour_of_day();
        const std::size_t day = static_cast<std::size_t>(t / kHoursPerDay);
        const std::size_t n = static_cast<std::size_t>(m_config.households);

        if (t == 0 || (hod == 0 && hb.day() == 1)) adopt_to_target(hb);
        if (hod == 0) {
            ++m_result.messages.tariff_publications;
            std::fill(m_peak_today.begin(), m_peak_today.end(), 0.0);
        }
        std::fill(m_evm.begin(), m_evm.end(), 0.0);

        // (1) departures
        for (EvUnit& ev : m_evs) {
            if (ev.away || ev.unplug_hour != h) continue;
            process_departure(ev, h);
        }
        // (2) arrivals: sample tomorrow's trip, plug in, request a schedule
        for (EvUnit& ev : m_evs) {
            if (!ev.away || ev.pending.arrival.floor_hour().hour_index() != h) continue;
            ev.away = false;
            plug_in(ev, ev.pending.arrival, next_day_trip(ev.pending.arrival));
        }
        // (3) charging actions for plugged-in EVs
        const PriceComponents price = total_price_at(
            m_inputs.spot, m_config.tariff, m_config.fixed_addons_dkk_per_kwh, hb);
        const double intensity =
            m_inputs.emissions ? m_inputs.emissions->at_hour(h) : 0.0;
        int plugged_count = 0;
        for (EvUnit& ev : m_evs) {
            if (ev.away || !ev.plugged) continue;
            ++plugged_count;
            if (!ev.has_schedule) continue;
            const EvModel& model = m_inputs.ev_catalog[static_cast<std::size_t>(ev.model_idx)];
            const ChargePointSpec charger = effective_charger(m_config.charge_point, model);
            const ChargingAction action = next_action(ev.schedule, model, charger,
                                                      m_config.strategy.options, ev.state, h);
            if (action.kind != ActionKind::Charge) continue;
            const ChargeResult res = apply_charge(model, ev.state, charger, action.duration_h);
            ev.state = res.state;
            HouseholdLedger& ledger = m_result.ledgers[static_cast<std::size_t>(ev.household)];
            ledger.ev_gain_kwh += res.battery_gain_kwh;
            ledger.max_soc = std::max(ledger.max_soc, ev.state.soc);
            m_evm[static_cast<std::size_t>(ev.household)] += res.metered_kwh;
        }

        // (4)+(5)+(7) meter every household once, aggregate, bill, accrue
        SystemSeries& s = m_result.series;
        const std::size_t ti = static_cast<std::size_t>(t);
        double base_sum = 0.0, total_sum = 0.0, ev_sum = 0.0;
        double billed = 0.0, billed_owners = 0.0, dso = 0.0, ev_cost = 0.0, co2 = 0.0;
        double peak_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double base = m_inputs.base_load.at(h, static_cast<int>(i));
            const double evm = m_evm[i];
            const double metered = base + evm;
            HouseholdLedger& ledger = m_result.ledgers[i];

            base_sum += base;
            ev_sum += evm;
            total_sum += metered;

            const double cost = metered * price.total();
            ledger.bill_dkk += cost;
            ledger.metered_kwh += metered;
            billed += cost;
            if (ledger.has_ev) billed_owners += cost;
            dso += metered * price.tariff;
            if (evm > 0.0) {
                ledger.ev_metered_kwh += evm;
                ledger.ev_cost_dkk += evm * price.total();
                ledger.ev_co2_g += evm * intensity;
                ev_cost += evm * price.total();
                co2 += evm * intensity;
            }
            m_peak_today[i] = std::max(m_peak_today[i], metered);
            peak_sum += m_peak_today[i];
            if (m_result.traced) m_result.trace_metered_kwh[ti * n + i] = metered;
        }
        m_result.messages.meter_readings += n;

        s.total_kw[ti] = total_sum;
        s.base_kw[ti] = base_sum;
        s.ev_kw[ti] = ev_sum;
        s.billed_dkk[ti] = billed;
        s.billed_ev_owners_dkk[ti] = billed_owners;
        s.dso_tariff_dkk[ti] = dso;
        s.ev_cost_dkk[ti] = ev_cost;
        s.ev_metered_kwh[ti] = ev_sum;
        s.co2_g[ti] = co2;
        s.household_peak_sum_kw[ti] = peak_sum;
        s.plugged_evs[ti] = plugged_count;
        s.owned_evs[ti] = m_owner_count;

        if (ev_sum > plugged_count * m_config.charge_point.power_kw + 1e-6) {
            throw InternalError("EV load " + std::to_string(ev_sum) + " kW exceeds " +
                                std::to_string(plugged_count) + " boxes at " + hb.iso());
        }

        m_result.day_peak_kw[day] = std::max(m_result.day_peak_kw[day], total_sum);
        if (hod == kHoursPerDay - 1) m_result.day_household_peak_sum_kw[day] = peak_sum;

        // (6) overload check, strict and per-hour
        if (total_sum > m_config.transformer_capacity_kw) {
            m_result.overloads.push_back(
                OverloadEvent{h, total_sum, m_config.transformer_capacity_kw, m_owner_count});
        }
    }

    void process_departure(EvUnit& ev, std::int64_t h)
    {
        const EvModel& model = m_inputs.ev_catalog[static_cast<std::size_t>(ev.model_idx)];
        HouseholdLedger& ledger = m_result.ledgers[static_cast<std::size_t>(ev.household)];

        const double demand = ev.pending.distance_km * model.consumption_kwh_per_km;
        const double available = battery_energy(model, ev.state);
        if (available + kEnergyEps < demand) {
            m_result.dissatisfactions.push_back(
                DissatisfactionEvent{h, ev.household, demand, available});
        }
        const TripResult res = apply_trip(model, ev.state, ev.pending);
        ev.state = res.state;
        ledger.ev_trip_kwh += res.consumed_kwh;
        ++ledger.trips;
        if (ev.state.depleted) {
            ++ledger.depleted_trips;
            ev.state.depleted = false; // flag is per trip
        }
        else {
            ledger.min_post_trip_soc = std::min(ledger.min_post_trip_soc, ev.state.soc);
        }
        ev.away = true;
        ev.plugged = false;
        ev.has_schedule = false;
    }

    Trip next_day_trip(SimTime reference)
    {
        return sample_daily_trip(m_inputs.driving, m_rng, reference.floor_day().plus_days(1));
    }

    void plug_in(EvUnit& ev, SimTime now, Trip next_trip)
    {
        const EvModel& model = m_inputs.ev_catalog[static_cast<std::size_t>(ev.model_idx)];
        ev.pending = next_trip;
        ev.unplug_hour = next_trip.departure.ceil_hour().hour_index();

        const SimTime departure = std::min(next_trip.departure, m_config.horizon.end);
        ChargeRequest req;
        req.plug_in = now;
        req.departure = departure;
        req.state = ev.state;
        req.model = model;
        req.charger = effective_charger(m_config.charge_point, model);
        req.prefs = m_config.strategy.prefs;
        req.next_trip_km = next_trip.distance_km;

        if (m_config.plug_in_policy == ScenarioConfig::PlugInPolicy::WhenBelowTarget) {
            const double target = effective_target_soc(req.prefs, model, req.next_trip_km);
            if (required_energy(model, ev.state, target) <= kEnergyEps) {
                ev.plugged = false;
                ev.has_schedule = false;
                return;
            }
        }
        ev.plugged = true;
        ++m_result.messages.plug_in_events;
        ev.schedule = m_provider.request_schedule(req);
        ev.has_schedule = true;
    }

    void adopt_to_target(SimTime hb)
    {
        const int target = m_inputs.adoption.target_at(hb.month_index());
        if (target > m_config.households) {
            throw ConfigError("adoption target " + std::to_string(target) + " exceeds " +
                              std::to_string(m_config.households) + " households");
        }
        while (m_owner_count < target && !m_non_owners.empty()) {
            const std::size_t pick =
                static_cast<std::size_t>(m_rng.uniform_int(static_cast<std::int64_t>(m_non_owners.size())));
            const int household = m_non_owners[pick];
            m_non_owners[pick] = m_non_owners.back();
            m_non_owners.pop_back();

            EvUnit ev;
            ev.household = household;
            ev.model_idx = sample_model();
            ev.state.soc = m_config.initial_soc;

            HouseholdLedger& ledger = m_result.ledgers[static_cast<std::size_t>(household)];
            ledger.has_ev = true;
            ledger.ev_model = ev.model_idx;
            ledger.adopted_hour = hb.hour_index();
            ledger.soc_at_adoption = ev.state.soc;
            ledger.max_soc = ev.state.soc;

            plug_in(ev, hb, next_day_trip(hb));
            m_evs.push_back(std::move(ev));
            ++m_owner_count;
        }
    }

    int sample_model()
    {
        const std::vector<double>& w = m_inputs.adoption.model_weights;
        double total = 0.0;
        for (double x : w) total += x;
        const double r = m_rng.uniform01() * total;
        double cum = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            cum += w[i];
            if (r < cum) return static_cast<int>(i);
        }
        return static_cast<int>(w.size()) - 1;
    }

    const ScenarioConfig& m_config;
    const InputBundle& m_inputs;
    Rng m_rng;
    SimulationResult m_result;
    ChargingServiceProvider m_provider;

    std::vector<EvUnit> m_evs;
    std::vector<int> m_non_owners;
    int m_owner_count = 0;
    std::vector<double> m_evm;        // this hour's EV metered kWh per household
    std::vector<double> m_peak_today; // per-household peak so far today
};

} // namespace

SimulationResult run(const ScenarioConfig& config, const InputBundle& inputs)
{
    config.validate();
    inputs.validate(config.horizon, config.households);
    Simulation sim(config, inputs);
    return sim.take();
}

SimulationResult run(const ScenarioConfig& config)
{
    const InputBundle inputs = build_inputs(config);
    return run(config, inputs);
}

} // namespace evsim
