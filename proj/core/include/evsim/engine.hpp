#pragma once

#include <cstdint>
#include <vector>

#include "evsim/config.hpp"
#include "evsim/inputs.hpp"

namespace evsim {

struct MessageCounters {
    std::uint64_t schedule_requests = 0;
    std::uint64_t schedule_responses = 0;
    std::uint64_t meter_readings = 0;
    std::uint64_t tariff_publications = 0;
    std::uint64_t plug_in_events = 0;
};

struct OverloadEvent {
    std::int64_t hour = 0;
    double aggregate_load_kw = 0.0;
    double capacity_kw = 0.0;
    int ev_count = 0; // EV-owning households when the overload happened
};

struct DissatisfactionEvent {
    std::int64_t hour = 0;
    int household = -1;
    double required_kwh = 0.0;  // energy the departing trip demands
    double available_kwh = 0.0; // energy on board at departure
};

struct HouseholdLedger {
    double bill_dkk = 0.0;
    double metered_kwh = 0.0;

    bool has_ev = false;
    int ev_model = -1;
    std::int64_t adopted_hour = -1;
    double soc_at_adoption = 0.0;
    double final_soc = 0.0;
    double max_soc = 0.0;
    double min_post_trip_soc = 1.0; // over non-depleted trips only
    double ev_metered_kwh = 0.0;
    double ev_gain_kwh = 0.0; // battery-side
    double ev_trip_kwh = 0.0;
    double ev_cost_dkk = 0.0;
    double ev_co2_g = 0.0;
    std::uint64_t trips = 0;
    std::uint64_t depleted_trips = 0;
};

/// One value per simulated hour. Sums over households always run in
/// ascending household order, so recomputations can match bit-exactly.
struct SystemSeries {
    std::int64_t start_hour = 0;
    std::vector<double> total_kw;
    std::vector<double> base_kw;
    std::vector<double> ev_kw;
    std::vector<double> billed_dkk;
    std::vector<double> billed_ev_owners_dkk;
    std::vector<double> dso_tariff_dkk;
    std::vector<double> ev_cost_dkk;
    std::vector<double> ev_metered_kwh;
    std::vector<double> co2_g;
    std::vector<double> household_peak_sum_kw; // sum of per-household peaks so far today
    std::vector<int> plugged_evs;
    std::vector<int> owned_evs;
};

struct SimulationResult {
    HorizonSpec horizon;
    int households = 0;
    double capacity_kw = 0.0;
    std::uint64_t seed = 0;
    bool emissions_present = false;

    SystemSeries series;
    std::vector<OverloadEvent> overloads;
    std::vector<DissatisfactionEvent> dissatisfactions;
    MessageCounters messages;
    std::vector<HouseholdLedger> ledgers;

    std::vector<double> day_peak_kw;               // aggregate peak per day
    std::vector<double> day_household_peak_sum_kw; // sum of individual daily peaks

    bool traced = false;
    std::vector<double> trace_metered_kwh; // hour-major per household when traced

    double trace_at(std::int64_t hour, int household) const
    {
        return trace_metered_kwh[static_cast<std::size_t>(hour - series.start_hour) *
                                     static_cast<std::size_t>(households) +
                                 static_cast<std::size_t>(household)];
    }
};

SimulationResult run(const ScenarioConfig& config, const InputBundle& inputs);
SimulationResult run(const ScenarioConfig& config); // loads/generates the inputs first

} // namespace evsim
