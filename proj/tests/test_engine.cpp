#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "evsim/config.hpp"
#include "evsim/engine.hpp"
#include "evsim/errors.hpp"
#include "evsim/pricing.hpp"

using namespace evsim;

namespace {

ScenarioConfig year_config(StrategyKind kind)
{
    ScenarioConfig cfg;
    cfg.horizon.start = SimTime::from_ymd(2024, 1, 1, 0, 0);
    cfg.horizon.end = SimTime::from_ymd(2025, 1, 1, 0, 0);
    cfg.households = 8;
    cfg.transformer_capacity_kw = 1e9;
    cfg.seed = 42;
    cfg.strategy.options.kind = kind;
    cfg.adoption.kind = AdoptionConfig::Kind::Table;
    cfg.adoption.table = {{"2024-01", 6}};
    cfg.trace_households = true;
    SyntheticSpec spec;
    spec.horizon = cfg.horizon;
    spec.households = cfg.households;
    cfg.inputs = spec;
    return cfg;
}

} // namespace

TEST_CASE("every plug-in raises exactly one schedule request and response")
{
    const SimulationResult r = run(year_config(StrategyKind::Rtp));
    CHECK(r.messages.plug_in_events > 0);
    CHECK(r.messages.schedule_requests == r.messages.plug_in_events);
    CHECK(r.messages.schedule_responses == r.messages.schedule_requests);
    CHECK(r.messages.tariff_publications == static_cast<std::uint64_t>(r.horizon.days()));
    CHECK(r.messages.meter_readings ==
          static_cast<std::uint64_t>(r.horizon.hours()) * static_cast<std::uint64_t>(r.households));
}

TEST_CASE("ownership follows the adoption table month by month")
{
    ScenarioConfig cfg = year_config(StrategyKind::Traditional);
    cfg.adoption.table = {{"2024-01", 2}, {"2024-06", 5}};
    const SimulationResult r = run(cfg);

    const std::int64_t start = r.horizon.start_hour();
    const std::int64_t june = SimTime::from_ymd(2024, 6, 1, 0, 0).hour_index();
    CHECK(r.series.owned_evs[0] == 2);
    CHECK(r.series.owned_evs[static_cast<std::size_t>(june - start - 1)] == 2);
    CHECK(r.series.owned_evs[static_cast<std::size_t>(june - start)] == 5);
    CHECK(r.series.owned_evs.back() == 5);
    for (std::size_t t = 1; t < r.series.owned_evs.size(); ++t) {
        CHECK(r.series.owned_evs[t] >= r.series.owned_evs[t - 1]);
    }
    int with_ev = 0;
    for (const HouseholdLedger& l : r.ledgers) with_ev += l.has_ev ? 1 : 0;
    CHECK(with_ev == 5);
}

TEST_CASE("per-household bills equal metered energy times the hourly price")
{
    const ScenarioConfig cfg = year_config(StrategyKind::Rtp);
    const InputBundle inputs = build_inputs(cfg);
    const SimulationResult r = run(cfg, inputs);
    REQUIRE(r.traced);

    const std::int64_t hours = r.horizon.hours();
    for (int i = 0; i < r.households; ++i) {
        double bill = 0.0, metered = 0.0;
        for (std::int64_t t = 0; t < hours; ++t) {
            const std::int64_t h = r.horizon.start_hour() + t;
            const double price =
                total_price_at(inputs.spot, cfg.tariff, cfg.fixed_addons_dkk_per_kwh, hour_start(h))
                    .total();
            bill += r.trace_at(h, i) * price;
            metered += r.trace_at(h, i);
        }
        CHECK(std::abs(bill - r.ledgers[static_cast<std::size_t>(i)].bill_dkk) < 1e-6);
        CHECK(std::abs(metered - r.ledgers[static_cast<std::size_t>(i)].metered_kwh) < 1e-6);
    }

    for (std::size_t t = 0; t < static_cast<std::size_t>(hours); ++t) {
        const std::int64_t h = r.horizon.start_hour() + static_cast<std::int64_t>(t);
        double total = 0.0;
        for (int i = 0; i < r.households; ++i) total += r.trace_at(h, i);
        CHECK(total == r.series.total_kw[t]); // identical summation order, bit-exact
    }
}

TEST_CASE("per-EV battery energy balances over the whole run")
{
    const ScenarioConfig cfg = year_config(StrategyKind::Tou);
    const InputBundle inputs = build_inputs(cfg);
    const SimulationResult r = run(cfg, inputs);

    for (const HouseholdLedger& l : r.ledgers) {
        if (!l.has_ev) continue;
        const double cap = inputs.ev_catalog[static_cast<std::size_t>(l.ev_model)].battery_capacity_kwh;
        const double delta = cap * (l.final_soc - l.soc_at_adoption);
        CHECK(std::abs(delta - (l.ev_gain_kwh - l.ev_trip_kwh)) < 1e-6);
        CHECK(std::abs(l.ev_gain_kwh - l.ev_metered_kwh * 0.84) < 1e-6);
        CHECK(l.trips > 0);
    }
}

TEST_CASE("ev load never exceeds the plugged-in box capacity")
{
    const SimulationResult r = run(year_config(StrategyKind::Traditional));
    for (std::size_t t = 0; t < r.series.ev_kw.size(); ++t) {
        CHECK(r.series.ev_kw[t] <= r.series.plugged_evs[t] * 3.7 + 1e-9);
        CHECK(r.series.base_kw[t] > 0.0);
        CHECK(r.series.total_kw[t] >= r.series.base_kw[t] - 1e-12);
    }
}

TEST_CASE("identical configuration and seed reproduce the run bit for bit")
{
    const ScenarioConfig cfg = year_config(StrategyKind::Rtp);
    const SimulationResult a = run(cfg);
    const SimulationResult b = run(cfg);

    REQUIRE(a.series.total_kw.size() == b.series.total_kw.size());
    CHECK(std::memcmp(a.series.total_kw.data(), b.series.total_kw.data(),
                      a.series.total_kw.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.series.billed_dkk.data(), b.series.billed_dkk.data(),
                      a.series.billed_dkk.size() * sizeof(double)) == 0);
    CHECK(a.messages.schedule_requests == b.messages.schedule_requests);
    CHECK(a.dissatisfactions.size() == b.dissatisfactions.size());

    ScenarioConfig other = cfg;
    other.seed = 43;
    const SimulationResult c = run(other);
    CHECK(std::memcmp(a.series.total_kw.data(), c.series.total_kw.data(),
                      a.series.total_kw.size() * sizeof(double)) != 0);
}

TEST_CASE("overload events are exactly the strict exceedances of capacity")
{
    ScenarioConfig cfg = year_config(StrategyKind::Rtp);
    const SimulationResult free_run = run(cfg);

    std::vector<double> sorted = free_run.series.total_kw;
    std::sort(sorted.begin(), sorted.end());
    const double capacity = sorted[sorted.size() * 3 / 4];

    cfg.transformer_capacity_kw = capacity;
    const SimulationResult r = run(cfg);

    std::size_t expected = 0;
    for (double v : r.series.total_kw) {
        if (v > capacity) ++expected;
    }
    CHECK(r.overloads.size() == expected);
    for (const OverloadEvent& e : r.overloads) {
        CHECK(e.aggregate_load_kw > e.capacity_kw);
        CHECK(e.capacity_kw == capacity);
        const std::size_t t = static_cast<std::size_t>(e.hour - r.horizon.start_hour());
        CHECK(e.aggregate_load_kw == r.series.total_kw[t]);
        CHECK(e.ev_count == r.series.owned_evs[t]);
    }
    for (std::size_t i = 1; i < r.overloads.size(); ++i) {
        CHECK(r.overloads[i].hour > r.overloads[i - 1].hour);
    }
}

TEST_CASE("plug-in policy when_below_target skips EVs already at target")
{
    ScenarioConfig always = year_config(StrategyKind::Rtp);
    always.initial_soc = 1.0;
    always.strategy.prefs.desired_soc = 0.1;

    ScenarioConfig lazy = always;
    lazy.plug_in_policy = ScenarioConfig::PlugInPolicy::WhenBelowTarget;

    const SimulationResult a = run(always);
    const SimulationResult b = run(lazy);
    CHECK(b.messages.plug_in_events < a.messages.plug_in_events);
    CHECK(b.messages.schedule_requests == b.messages.plug_in_events);
}

TEST_CASE("undersized batteries produce dissatisfaction events")
{
    ScenarioConfig cfg = year_config(StrategyKind::Traditional);
    SyntheticSpec spec;
    spec.horizon = cfg.horizon;
    spec.households = cfg.households;
    spec.ev_catalog = {EvModel{"micro", 5.0, 0.3, 3.7}};
    cfg.inputs = spec;

    const SimulationResult r = run(cfg);
    CHECK(!r.dissatisfactions.empty());
    for (const DissatisfactionEvent& e : r.dissatisfactions) {
        CHECK(e.required_kwh > e.available_kwh);
        CHECK(e.available_kwh >= 0.0);
        CHECK(e.household >= 0);
        CHECK(e.household < cfg.households);
    }
    std::uint64_t depleted = 0;
    for (const HouseholdLedger& l : r.ledgers) depleted += l.depleted_trips;
    CHECK(depleted >= r.dissatisfactions.size());
}

TEST_CASE("an adoption plan larger than the neighborhood is rejected")
{
    ScenarioConfig cfg = year_config(StrategyKind::Rtp);
    cfg.adoption.table = {{"2024-01", 50}};
    CHECK_THROWS_AS((void)run(cfg), ConfigError);
}
