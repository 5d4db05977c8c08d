#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "evsim/rng.hpp"
#include "evsim/strategy.hpp"

using namespace evsim;

namespace {

const SimTime kBase = SimTime::from_ymd(2025, 6, 2, 0, 0); // a Monday

TariffSchedule flat_tariff(double rate)
{
    TariffSchedule t;
    t.label = "flat";
    t.seasons = {TariffSeason{{1, 1}, {12, 31}, {TariffPeriod{0, 24, rate}}}};
    return t;
}

SpotPriceSeries series_at(SimTime first_hour, std::vector<double> values)
{
    SpotPriceSeries s;
    s.start_hour = first_hour.floor_hour().hour_index();
    s.values = std::move(values);
    s.name = "spot";
    return s;
}

/// A request whose battery-side need is exactly `charge_hours` hours of the
/// 3.7 kW / 0.84 box. A half-hour margin keeps the whole-hour count stable
/// against rounding.
ChargeRequest request_needing(SimTime plug, SimTime depart, double charge_hours)
{
    ChargeRequest req;
    req.plug_in = plug;
    req.departure = depart;
    req.charger = ChargePointSpec{3.7, 0.84};
    req.model = EvModel{"test", charge_hours > 0.0 ? charge_hours * req.charger.battery_side_kw()
                                                   : 24.0,
                        0.15, 11.0};
    req.state = BatteryState{0.0, false};
    req.prefs.desired_soc = 1.0;
    if (charge_hours <= 0.0) req.state.soc = 1.0;
    return req;
}

std::vector<std::int64_t> slot_hours(const ChargingSchedule& s)
{
    std::vector<std::int64_t> hours;
    for (const ScheduleSlot& slot : s.slots) hours.push_back(slot.hour);
    return hours;
}

double final_soc(const ChargingSchedule& sched, const ChargeRequest& req,
                 const StrategyOptions& opts)
{
    BatteryState state = req.state;
    const std::int64_t first = req.plug_in.floor_hour().hour_index();
    const std::int64_t last = req.departure.ceil_hour().hour_index();
    for (std::int64_t h = first; h < last; ++h) {
        const ChargingAction a = next_action(sched, req.model, req.charger, opts, state, h);
        if (a.kind == ActionKind::Charge) {
            state = apply_charge(req.model, state, req.charger, a.duration_h).state;
        }
    }
    return state.soc;
}

/// Exhaustive minimum-cost size-k hour subset; ties to the lexicographically
/// earliest hour set. Prices must be integer-valued so sums compare exactly.
std::vector<std::int64_t> cheapest_subset(const std::vector<std::int64_t>& hours,
                                          const std::vector<double>& prices, std::size_t k)
{
    const std::size_t m = hours.size();
    REQUIRE(m <= 20);
    double best_cost = 0.0;
    std::vector<std::int64_t> best;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
        double cost = 0.0;
        std::vector<std::int64_t> chosen;
        for (std::size_t i = 0; i < m; ++i) {
            if (mask & (1u << i)) {
                cost += prices[i];
                chosen.push_back(hours[i]);
            }
        }
        if (best.empty() || cost < best_cost || (cost == best_cost && chosen < best)) {
            best_cost = cost;
            best = std::move(chosen);
        }
    }
    return best;
}

} // namespace

TEST_CASE("target soc honors cap, distance optimization and floor")
{
    EvModel m{"test", 40.0, 0.15, 11.0};

    EvUserPreferences dist;
    dist.desired_soc = 1.0;
    dist.distance_optimization = true;
    dist.min_soc_floor = 0.2;
    CHECK(effective_target_soc(dist, m, 60.0) == doctest::Approx(0.425).epsilon(1e-12));
    CHECK(effective_target_soc(dist, m, 0.0) == doctest::Approx(0.20).epsilon(1e-12));
    CHECK(effective_target_soc(dist, m, 1000.0) == 1.0);

    EvUserPreferences cap;
    cap.desired_soc = 1.0;
    cap.soc_cap = 0.8;
    CHECK(effective_target_soc(cap, m, std::nullopt) == 0.80);

    EvUserPreferences plain;
    plain.desired_soc = 0.9;
    CHECK(effective_target_soc(plain, m, 120.0) == 0.9);
}

TEST_CASE("cheapest-hours selection matches the stated examples")
{
    const TariffSchedule zero = flat_tariff(0.0);

    ChargeRequest req = request_needing(kBase, kBase.plus_hours(4), 2.0);
    ChargingSchedule s = rtp_schedule(req, {}, series_at(kBase, {5, 1, 3, 2}), zero, 0.0);
    CHECK(slot_hours(s) == std::vector<std::int64_t>{kBase.hour_index() + 1, kBase.hour_index() + 3});

    req = request_needing(kBase, kBase.plus_hours(4), 0.0);
    s = rtp_schedule(req, {}, series_at(kBase, {5, 1, 3, 2}), zero, 0.0);
    CHECK(s.slots.empty());

    req = request_needing(kBase, kBase.plus_hours(3), 1.0);
    s = rtp_schedule(req, {}, series_at(kBase, {2, 1, 1}), zero, 0.0);
    CHECK(slot_hours(s) == std::vector<std::int64_t>{kBase.hour_index() + 1});
}

TEST_CASE("cheapest-hours selection equals brute force with earliest-time ties")
{
    Rng rng(20250601);
    const TariffSchedule zero = flat_tariff(0.0);
    for (int rep = 0; rep < 300; ++rep) {
        const int window = 1 + static_cast<int>(rng.uniform_int(12));
        const int need = static_cast<int>(rng.uniform_int(7));
        const int plug_min = static_cast<int>(rng.uniform_int(60));
        const int depart_min = static_cast<int>(rng.uniform_int(60));
        const SimTime plug = kBase.plus_minutes(plug_min);
        const SimTime depart = kBase.plus_hours(1 + window).plus_minutes(depart_min);

        std::vector<double> prices;
        for (int i = 0; i < window + 3; ++i) prices.push_back(static_cast<double>(rng.uniform_int(10)));
        const SpotPriceSeries spot = series_at(kBase, prices);

        const ChargeRequest req = request_needing(plug, depart, need > 0 ? need - 0.5 : 0.0);
        const ChargingSchedule got = rtp_schedule(req, {}, spot, zero, 0.0);

        const std::vector<std::int64_t> hours = whole_hours_between(plug, depart);
        std::vector<double> hour_prices;
        for (std::int64_t h : hours) hour_prices.push_back(spot.at_hour(h));
        const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(need), hours.size());
        CHECK(slot_hours(got) == cheapest_subset(hours, hour_prices, k));

        const ChargingSchedule again = rtp_schedule(req, {}, spot, zero, 0.0);
        CHECK(slot_hours(again) == slot_hours(got));
    }
}

TEST_CASE("tariff-ranked selection fills the cheapest period from midnight")
{
    const TariffSchedule tm3 = TariffSchedule::tm3_default();
    const SimTime plug = SimTime::from_ymd(2025, 6, 2, 18, 0);
    const SimTime depart = SimTime::from_ymd(2025, 6, 3, 7, 0);
    const SimTime midnight = SimTime::from_ymd(2025, 6, 3, 0, 0);

    ChargingSchedule s = tou_schedule(request_needing(plug, depart, 3.0), {}, tm3);
    CHECK(slot_hours(s) == std::vector<std::int64_t>{midnight.hour_index(), midnight.hour_index() + 1,
                                                     midnight.hour_index() + 2});

    s = tou_schedule(request_needing(plug, depart, 7.0), {}, tm3);
    std::vector<std::int64_t> expect{SimTime::from_ymd(2025, 6, 2, 21, 0).hour_index()};
    for (int i = 0; i < 6; ++i) expect.push_back(midnight.hour_index() + i);
    CHECK(slot_hours(s) == expect);

    s = tou_schedule(request_needing(plug, depart, 0.0), {}, tm3);
    CHECK(s.slots.empty());
}

TEST_CASE("tariff-ranked selection never skips a cheaper period hour")
{
    Rng rng(77);
    const TariffSchedule tm3 = TariffSchedule::tm3_default();
    for (int rep = 0; rep < 200; ++rep) {
        const SimTime plug = kBase.plus_minutes(rng.uniform_int(3 * 24 * 60));
        const SimTime depart = plug.plus_minutes(60 + rng.uniform_int(30 * 60));
        const int need = static_cast<int>(rng.uniform_int(9));
        const ChargingSchedule s =
            tou_schedule(request_needing(plug, depart, need > 0 ? need - 0.5 : 0.0), {}, tm3);

        std::vector<std::int64_t> unselected;
        const std::vector<std::int64_t> chosen = slot_hours(s);
        for (std::int64_t h : whole_hours_between(plug, depart)) {
            if (std::find(chosen.begin(), chosen.end(), h) == chosen.end()) unselected.push_back(h);
        }
        double max_sel = -1.0;
        for (std::int64_t h : chosen) {
            max_sel = std::max(max_sel, tm3.rate_at(SimTime::from_hour_index(h)));
        }
        for (std::int64_t h : unselected) {
            if (!chosen.empty()) CHECK(max_sel <= tm3.rate_at(SimTime::from_hour_index(h)));
        }
    }
}

TEST_CASE("continuous charging starts at plug-in and truncates at departure")
{
    const SimTime plug = SimTime::from_ymd(2025, 6, 2, 17, 30);
    ChargeRequest req = request_needing(plug, plug.plus_hours(12), 3.2);
    ChargingSchedule s = traditional_schedule(req);
    CHECK(s.continuous);

    BatteryState state = req.state;
    std::vector<double> durations;
    for (std::int64_t h = plug.floor_hour().hour_index(); h < plug.floor_hour().hour_index() + 5;
         ++h) {
        const ChargingAction a = next_action(s, req.model, req.charger, {}, state, h);
        durations.push_back(a.kind == ActionKind::Charge ? a.duration_h : 0.0);
        if (a.kind == ActionKind::Charge) {
            state = apply_charge(req.model, state, req.charger, a.duration_h).state;
        }
    }
    REQUIRE(durations.size() == 5);
    CHECK(durations[0] == doctest::Approx(0.5).epsilon(1e-9));   // 17:30-18:00
    CHECK(durations[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(durations[2] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(durations[3] == doctest::Approx(0.7).epsilon(1e-9));   // ends 20:42
    CHECK(durations[4] == 0.0);
    CHECK(state.soc == doctest::Approx(1.0).epsilon(1e-9));

    req = request_needing(plug, plug.plus_hours(12), 0.0);
    s = traditional_schedule(req);
    CHECK(next_action(s, req.model, req.charger, {}, req.state, plug.floor_hour().hour_index())
              .kind == ActionKind::None);

    const SimTime late = SimTime::from_ymd(2025, 6, 2, 22, 0);
    req = request_needing(late, late.plus_minutes(90), 4.0);
    s = traditional_schedule(req);
    state = req.state;
    double charged = 0.0;
    for (std::int64_t h = late.hour_index(); h < late.hour_index() + 3; ++h) {
        const ChargingAction a = next_action(s, req.model, req.charger, {}, state, h);
        if (a.kind == ActionKind::Charge) {
            state = apply_charge(req.model, state, req.charger, a.duration_h).state;
            charged += a.duration_h;
        }
    }
    CHECK(charged == doctest::Approx(1.5).epsilon(1e-9)); // 22:00-23:30, unfinished
    CHECK(state.soc < 1.0);
}

TEST_CASE("hourly action selection follows the schedule and the fallback rule")
{
    const TariffSchedule zero = flat_tariff(0.0);
    const ChargeRequest req = request_needing(kBase, kBase.plus_hours(6), 1.5);
    const SpotPriceSeries spot = series_at(kBase, {9, 1, 1, 9, 9, 9});
    const ChargingSchedule s = rtp_schedule(req, {}, spot, zero, 0.0);
    REQUIRE(slot_hours(s) ==
            std::vector<std::int64_t>{kBase.hour_index() + 1, kBase.hour_index() + 2});

    BatteryState state = req.state;
    CHECK(next_action(s, req.model, req.charger, {}, state, kBase.hour_index()).kind ==
          ActionKind::Idle);
    CHECK(next_action(s, req.model, req.charger, {}, state, kBase.hour_index() + 1).kind ==
          ActionKind::Charge);

    // Target reached: no action even inside a slot.
    BatteryState full{1.0, false};
    CHECK(next_action(s, req.model, req.charger, {}, full, kBase.hour_index() + 1).kind ==
          ActionKind::None);

    // All slots passed, still short: price-blind continuation unless disabled,
    // in which case the box stays idle for the rest of the session.
    BatteryState low{0.1, false};
    StrategyOptions fb;
    CHECK(next_action(s, req.model, req.charger, fb, low, kBase.hour_index() + 4).kind ==
          ActionKind::Charge);
    fb.fallback_charging = false;
    CHECK(next_action(s, req.model, req.charger, fb, low, kBase.hour_index() + 4).kind ==
          ActionKind::Idle);
}

TEST_CASE("whole-hour planning under-provisions a tight window until fallback kicks in")
{
    const SimTime plug = SimTime::from_ymd(2025, 6, 2, 18, 10);
    const SimTime depart = SimTime::from_ymd(2025, 6, 2, 23, 30);
    const ChargeRequest req = request_needing(plug, depart, 4.6);
    const SpotPriceSeries spot = series_at(plug.floor_hour(), {1, 1, 1, 1, 1, 1});
    const TariffSchedule zero = flat_tariff(0.0);

    StrategyOptions opts;
    opts.kind = StrategyKind::Rtp;
    const ChargingSchedule s = rtp_schedule(req, opts, spot, zero, 0.0);
    CHECK(s.slots.size() == 4); // 19:00..23:00 whole hours only

    opts.fallback_charging = false;
    const double without = final_soc(s, req, opts);
    opts.fallback_charging = true;
    const double with = final_soc(s, req, opts);
    CHECK(without < s.target_soc - 1e-9);
    CHECK(with > without + 1e-9);
    CHECK(with == doctest::Approx(4.5 / 4.6).epsilon(1e-9)); // departure-limited

    // The 23:00 action must be a fallback charge of the remaining 30 minutes.
    BatteryState state = req.state;
    for (std::int64_t h = plug.floor_hour().hour_index(); h < depart.floor_hour().hour_index();
         ++h) {
        const ChargingAction a = next_action(s, req.model, req.charger, opts, state, h);
        if (a.kind == ActionKind::Charge) {
            state = apply_charge(req.model, state, req.charger, a.duration_h).state;
        }
    }
    const ChargingAction last =
        next_action(s, req.model, req.charger, opts, state, depart.floor_hour().hour_index());
    CHECK(last.kind == ActionKind::Charge);
    CHECK(last.duration_h == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("fractional planning uses the partial edge hours and hits the target")
{
    const SimTime plug = SimTime::from_ymd(2025, 6, 2, 18, 10);
    const SimTime depart = SimTime::from_ymd(2025, 6, 2, 23, 30);
    const ChargeRequest req = request_needing(plug, depart, 4.6);
    const SpotPriceSeries spot = series_at(plug.floor_hour(), {1, 1, 1, 1, 1, 1});
    const TariffSchedule zero = flat_tariff(0.0);

    StrategyOptions opts;
    opts.kind = StrategyKind::Rtp;
    opts.use_partial_hours = true;
    const ChargingSchedule s = rtp_schedule(req, opts, spot, zero, 0.0);
    CHECK(s.scheduled_hours() == doctest::Approx(4.6).epsilon(1e-9));
    CHECK(final_soc(s, req, opts) == doctest::Approx(s.target_soc).epsilon(1e-9));
}

TEST_CASE("fallback never lowers and immediacy never trails")
{
    Rng rng(99);
    const TariffSchedule tm3 = TariffSchedule::tm3_default();
    for (int rep = 0; rep < 150; ++rep) {
        const SimTime plug = kBase.plus_minutes(rng.uniform_int(2 * 24 * 60));
        const SimTime depart = plug.plus_minutes(60 + rng.uniform_int(24 * 60));
        const double need = rng.uniform01() * 8.0;
        const ChargeRequest req = request_needing(plug, depart, need);

        std::vector<double> prices;
        const std::int64_t first = plug.floor_hour().hour_index();
        for (std::int64_t h = first; h < depart.ceil_hour().hour_index(); ++h) {
            prices.push_back(static_cast<double>(rng.uniform_int(10)));
        }
        const SpotPriceSeries spot = series_at(SimTime::from_hour_index(first), prices);

        for (StrategyKind kind : {StrategyKind::Rtp, StrategyKind::Tou}) {
            StrategyOptions opts;
            opts.kind = kind;
            const ChargingSchedule s = build_schedule(req, opts, spot, tm3, 0.0);
            opts.fallback_charging = false;
            const double without = final_soc(s, req, opts);
            opts.fallback_charging = true;
            const double with = final_soc(s, req, opts);
            CHECK(with >= without - 1e-12);

            const double trad = final_soc(traditional_schedule(req), req, opts);
            CHECK(trad >= with - 1e-9);
        }
    }
}
