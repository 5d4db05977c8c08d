#include <benchmark/benchmark.h>

#include "evsim/pricing.hpp"
#include "evsim/rng.hpp"
#include "evsim/strategy.hpp"
#include "evsim/time.hpp"

using namespace evsim;

namespace {

SpotPriceSeries bench_prices(int hours)
{
    Rng rng(7);
    SpotPriceSeries s;
    s.start_hour = SimTime::from_ymd(2025, 1, 1).hour_index();
    s.name = "spot";
    s.values.resize(static_cast<std::size_t>(hours));
    for (double& v : s.values) v = 0.2 + rng.uniform01();
    return s;
}

ChargeRequest overnight_request()
{
    ChargeRequest req;
    req.plug_in = SimTime::from_ymd(2025, 1, 1, 17, 45);
    req.departure = SimTime::from_ymd(2025, 1, 2, 7, 30);
    req.charger = ChargePointSpec{3.7, 0.84};
    req.model = EvModel{"bench", 62.0, 0.18, 7.2};
    req.state = BatteryState{0.5, false};
    req.prefs.desired_soc = 1.0;
    return req;
}

std::vector<PricedSlot> priced_slots(int n)
{
    Rng rng(13);
    std::vector<PricedSlot> slots;
    slots.reserve(static_cast<std::size_t>(n));
    const std::int64_t h0 = SimTime::from_ymd(2025, 1, 1).hour_index();
    for (int i = 0; i < n; ++i) {
        slots.push_back({ScheduleSlot{h0 + i, 0.0, 1.0}, rng.uniform01()});
    }
    return slots;
}

void BM_SelectCheapest(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const std::vector<PricedSlot> candidates = priced_slots(n);
    for (auto _ : state) {
        auto chosen = select_cheapest(candidates, n / 2.0);
        benchmark::DoNotOptimize(chosen.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SelectCheapest)->Arg(8)->Arg(16)->Arg(64);

void BM_RtpSchedule(benchmark::State& state)
{
    const SpotPriceSeries prices = bench_prices(48);
    const TariffSchedule tariff = TariffSchedule::tm3_default();
    const ChargeRequest req = overnight_request();
    StrategyOptions options;
    options.kind = StrategyKind::Rtp;
    for (auto _ : state) {
        const ChargingSchedule sched = rtp_schedule(req, options, prices, tariff, 0.1);
        benchmark::DoNotOptimize(sched.slots.data());
    }
}
BENCHMARK(BM_RtpSchedule);

void BM_TouSchedule(benchmark::State& state)
{
    const TariffSchedule tariff = TariffSchedule::tm3_default();
    const ChargeRequest req = overnight_request();
    StrategyOptions options;
    options.kind = StrategyKind::Tou;
    for (auto _ : state) {
        const ChargingSchedule sched = tou_schedule(req, options, tariff);
        benchmark::DoNotOptimize(sched.slots.data());
    }
}
BENCHMARK(BM_TouSchedule);

void BM_NextAction(benchmark::State& state)
{
    const SpotPriceSeries prices = bench_prices(48);
    const TariffSchedule tariff = TariffSchedule::tm3_default();
    const ChargeRequest req = overnight_request();
    StrategyOptions options;
    options.kind = StrategyKind::Rtp;
    const ChargingSchedule sched = rtp_schedule(req, options, prices, tariff, 0.1);
    const std::int64_t h0 = req.plug_in.floor_hour().hour_index();
    const std::int64_t h1 = req.departure.ceil_hour().hour_index();
    BatteryState s{0.5, false};
    for (auto _ : state) {
        for (std::int64_t h = h0; h < h1; ++h) {
            const ChargingAction a = next_action(sched, req.model, req.charger, options, s, h);
            benchmark::DoNotOptimize(a.duration_h);
        }
    }
    state.SetItemsProcessed(state.iterations() * (h1 - h0));
}
BENCHMARK(BM_NextAction);

} // namespace

BENCHMARK_MAIN();
