#include <benchmark/benchmark.h>

#include "evsim/config.hpp"
#include "evsim/engine.hpp"
#include "evsim/metrics.hpp"
#include "evsim/synthetic.hpp"

using namespace evsim;

namespace {

ScenarioConfig bench_config(int days, StrategyKind kind)
{
    ScenarioConfig cfg;
    cfg.horizon.start = SimTime::from_ymd(2024, 1, 1);
    cfg.horizon.end = cfg.horizon.start.plus_days(days);
    cfg.households = 126;
    cfg.transformer_capacity_kw = 300.0;
    cfg.seed = 11;
    cfg.strategy.options.kind = kind;
    cfg.adoption.kind = AdoptionConfig::Kind::Table;
    cfg.adoption.table = {{"2024-01", 63}};
    SyntheticSpec spec;
    spec.horizon = cfg.horizon;
    spec.households = cfg.households;
    cfg.inputs = spec;
    return cfg;
}

void BM_BuildInputsQuarter(benchmark::State& state)
{
    const ScenarioConfig cfg = bench_config(90, StrategyKind::Traditional);
    for (auto _ : state) {
        const InputBundle inputs = build_inputs(cfg);
        benchmark::DoNotOptimize(inputs.base_load.kwh.data());
    }
}
BENCHMARK(BM_BuildInputsQuarter)->Unit(benchmark::kMillisecond);

void BM_SimulateQuarter(benchmark::State& state)
{
    const StrategyKind kind = static_cast<StrategyKind>(state.range(0));
    const ScenarioConfig cfg = bench_config(90, kind);
    const InputBundle inputs = build_inputs(cfg);
    for (auto _ : state) {
        const SimulationResult r = run(cfg, inputs);
        benchmark::DoNotOptimize(r.series.total_kw.data());
    }
    state.SetItemsProcessed(state.iterations() * cfg.horizon.hours());
}
BENCHMARK(BM_SimulateQuarter)
    ->Arg(static_cast<int>(StrategyKind::Traditional))
    ->Arg(static_cast<int>(StrategyKind::Rtp))
    ->Arg(static_cast<int>(StrategyKind::Tou))
    ->Unit(benchmark::kMillisecond);

void BM_SimulateYear(benchmark::State& state)
{
    const ScenarioConfig cfg = bench_config(365, StrategyKind::Rtp);
    const InputBundle inputs = build_inputs(cfg);
    for (auto _ : state) {
        const SimulationResult r = run(cfg, inputs);
        benchmark::DoNotOptimize(r.series.total_kw.data());
    }
    state.SetItemsProcessed(state.iterations() * cfg.horizon.hours());
}
BENCHMARK(BM_SimulateYear)->Unit(benchmark::kMillisecond);

void BM_KpiReport(benchmark::State& state)
{
    const ScenarioConfig cfg = bench_config(365, StrategyKind::Rtp);
    const SimulationResult r = run(cfg, build_inputs(cfg));
    for (auto _ : state) {
        const KpiReport kpi = kpi_report(r, cfg.reporting);
        benchmark::DoNotOptimize(kpi.dso_revenue_dkk);
    }
}
BENCHMARK(BM_KpiReport)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
