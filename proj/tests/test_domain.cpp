#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "evsim/domain.hpp"
#include "evsim/rng.hpp"

using namespace evsim;

namespace {

EvModel model_kwh(double capacity)
{
    return EvModel{"test", capacity, 0.15, 11.0};
}

const ChargePointSpec kBox37{3.7, 0.84};

Trip trip_km(double km)
{
    Trip t;
    t.departure = SimTime::from_ymd(2024, 1, 1, 8, 0);
    t.arrival = SimTime::from_ymd(2024, 1, 1, 16, 0);
    t.distance_km = km;
    return t;
}

} // namespace

TEST_CASE("battery energy is capacity times soc")
{
    CHECK(battery_energy(model_kwh(40), {0.5, false}) == 20.0);
    CHECK(battery_energy(model_kwh(40), {0.0, false}) == 0.0);
    CHECK(battery_energy(model_kwh(62), {1.0, false}) == 62.0);
}

TEST_CASE("required energy clamps at zero when the target is met")
{
    CHECK(required_energy(model_kwh(40), {0.5, false}, 1.0) == 20.0);
    CHECK(required_energy(model_kwh(40), {0.8, false}, 0.8) == 0.0);
    CHECK(required_energy(model_kwh(40), {0.9, false}, 0.8) == 0.0);
}

TEST_CASE("charging hours round up and are zero only for zero need")
{
    CHECK(required_charging_hours(20.0, kBox37) == 7);
    CHECK(required_charging_hours(0.0, kBox37) == 0);
    CHECK(required_charging_hours(28.0, ChargePointSpec{7.4, 0.84}) == 5);
    CHECK(required_charging_hours(1e-9, kBox37) == 1);
}

TEST_CASE("charging hours are monotone in need, power and efficiency")
{
    for (double e = 0.0; e <= 50.0; e += 0.7) {
        CHECK(required_charging_hours(e, kBox37) <= required_charging_hours(e + 0.7, kBox37));
        CHECK(required_charging_hours(e, ChargePointSpec{7.4, 0.84}) <=
              required_charging_hours(e, kBox37));
        CHECK(required_charging_hours(e, ChargePointSpec{3.7, 0.9}) <=
              required_charging_hours(e, kBox37));
    }
}

TEST_CASE("apply_charge meters the grid side and stores the battery side")
{
    const EvModel m = model_kwh(40);

    const ChargeResult full = apply_charge(m, {0.5, false}, kBox37, 1.0);
    CHECK(full.state.soc == doctest::Approx(0.5 + 3.7 * 0.84 / 40.0).epsilon(1e-12));
    CHECK(full.metered_kwh == 3.7);
    CHECK(full.battery_gain_kwh == doctest::Approx(3.108).epsilon(1e-12));

    const ChargeResult clamp = apply_charge(m, {0.99, false}, kBox37, 1.0);
    CHECK(clamp.state.soc == 1.0);
    CHECK(clamp.battery_gain_kwh == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(clamp.metered_kwh == doctest::Approx(0.4 / 0.84).epsilon(1e-12));

    const ChargeResult zero = apply_charge(m, {0.37, false}, kBox37, 0.0);
    CHECK(zero.state.soc == 0.37);
    CHECK(zero.metered_kwh == 0.0);
    CHECK(zero.battery_gain_kwh == 0.0);
}

TEST_CASE("apply_trip drains by distance and floors at empty")
{
    const EvModel m = model_kwh(40);

    const TripResult drive = apply_trip(m, {1.0, false}, trip_km(100.0));
    CHECK(drive.state.soc == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(!drive.state.depleted);
    CHECK(drive.consumed_kwh == doctest::Approx(15.0).epsilon(1e-12));

    const TripResult still = apply_trip(m, {0.42, false}, trip_km(0.0));
    CHECK(still.state.soc == 0.42);
    CHECK(!still.state.depleted);

    const TripResult flat = apply_trip(m, {0.1, false}, trip_km(100.0));
    CHECK(flat.state.soc == 0.0);
    CHECK(flat.state.depleted);
    CHECK(flat.consumed_kwh == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("effective charger is capped by the vehicle limit")
{
    EvModel slow = model_kwh(24);
    slow.max_charge_power_kw = 2.3;
    CHECK(effective_charger(kBox37, slow).power_kw == 2.3);
    CHECK(effective_charger(kBox37, slow).efficiency == 0.84);

    EvModel fast = model_kwh(62);
    fast.max_charge_power_kw = 11.0;
    CHECK(effective_charger(kBox37, fast).power_kw == 3.7);
}

TEST_CASE("soc stays in bounds and energy balances over random action sequences")
{
    Rng rng(7);
    for (int rep = 0; rep < 200; ++rep) {
        const EvModel m = model_kwh(10.0 + rng.uniform01() * 80.0);
        BatteryState state{rng.uniform01(), false};
        const double e0 = battery_energy(m, state);
        double gains = 0.0, consumed = 0.0;
        for (int step = 0; step < 50; ++step) {
            if (rng.uniform01() < 0.5) {
                const ChargeResult r = apply_charge(m, state, kBox37, rng.uniform01());
                state = r.state;
                gains += r.battery_gain_kwh;
                CHECK(r.metered_kwh * kBox37.efficiency == doctest::Approx(r.battery_gain_kwh)
                                                               .epsilon(1e-12));
            }
            else {
                const TripResult r = apply_trip(m, state, trip_km(rng.uniform01() * 120.0));
                state = r.state;
                consumed += r.consumed_kwh;
            }
            CHECK(state.soc >= 0.0);
            CHECK(state.soc <= 1.0);
        }
        CHECK(std::abs(battery_energy(m, state) - e0 - (gains - consumed)) < 1e-9);
    }
}

TEST_CASE("charging never increases the remaining required hours")
{
    Rng rng(11);
    for (int rep = 0; rep < 200; ++rep) {
        const EvModel m = model_kwh(20.0 + rng.uniform01() * 60.0);
        const BatteryState before{rng.uniform01(), false};
        const double target = rng.uniform01();
        const int hours_before =
            required_charging_hours(required_energy(m, before, target), kBox37);
        const BatteryState after = apply_charge(m, before, kBox37, rng.uniform01()).state;
        const int hours_after =
            required_charging_hours(required_energy(m, after, target), kBox37);
        CHECK(hours_after <= hours_before);
    }
}
