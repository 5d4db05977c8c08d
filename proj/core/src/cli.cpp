#include "evsim/cli.hpp"

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evsim/config.hpp"
#include "evsim/csv.hpp"
#include "evsim/engine.hpp"
#include "evsim/errors.hpp"
#include "evsim/metrics.hpp"
#include "evsim/report.hpp"
#include "evsim/synthetic.hpp"
#include "evsim/version.hpp"

namespace evsim {

namespace {

int do_simulate(const std::string& scenario_path, const std::string& out_dir,
                const std::string& baseline_path)
{
    const ScenarioConfig config = load_scenario(scenario_path);
    const SimulationResult result = run(config);
    const KpiReport kpi = kpi_report(result, config.reporting);

    std::vector<ComparisonRow> rows;
    const bool with_baseline = !baseline_path.empty();
    if (with_baseline) rows = compare(load_kpis(baseline_path), kpi);

    write_reports(config, result, kpi, out_dir, with_baseline ? &rows : nullptr);
    std::fputs(kpis_to_json(kpi).c_str(), stdout);
    return 0;
}

int do_compare(const std::string& baseline_path, const std::string& variant_path,
               const std::string& out_path)
{
    const std::vector<ComparisonRow> rows =
        compare(load_kpis(baseline_path), load_kpis(variant_path));
    const std::string csv = comparison_to_csv(rows);
    write_file_atomic(out_path, csv);
    std::fputs(csv.c_str(), stdout);
    return 0;
}

int do_generate(const std::string& spec_path, std::uint64_t seed, const std::string& out_dir)
{
    const SyntheticSpec spec = load_synthetic_spec(spec_path);
    write_synthetic_csvs(spec, seed, out_dir);
    return 0;
}

int do_kpis(const std::string& result_dir)
{
    std::fputs(kpis_to_json(recompute_kpis(result_dir)).c_str(), stdout);
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv)
{
    CLI::App app{"Hourly multi-agent simulator of EV home charging on one feeder"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string scenario_path, out_dir, baseline_path;
    CLI::App* sim = app.add_subcommand("simulate", "Run a scenario and write reports");
    sim->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    sim->add_option("--out", out_dir, "Output directory for reports")->required();
    sim->add_option("--baseline", baseline_path, "kpis.json of a baseline run to compare against");

    std::string cmp_baseline, cmp_variant, cmp_out;
    CLI::App* cmp = app.add_subcommand("compare", "Compare two KPI reports");
    cmp->add_option("--baseline", cmp_baseline, "Baseline kpis.json")->required();
    cmp->add_option("--variant", cmp_variant, "Variant kpis.json")->required();
    cmp->add_option("--out", cmp_out, "Output CSV file")->required();

    std::string spec_path, gen_out;
    std::uint64_t seed = 1;
    CLI::App* gen = app.add_subcommand("generate-data", "Write synthetic input CSVs");
    gen->add_option("--spec", spec_path, "Generator spec JSON file")->required();
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("--out", gen_out, "Output directory for CSVs")->required();

    std::string result_dir;
    CLI::App* kp = app.add_subcommand("kpis", "Recompute KPIs from a result directory");
    kp->add_option("--result", result_dir, "Directory holding a written result")->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return do_simulate(scenario_path, out_dir, baseline_path);
        if (cmp->parsed()) return do_compare(cmp_baseline, cmp_variant, cmp_out);
        if (gen->parsed()) return do_generate(spec_path, seed, gen_out);
        if (kp->parsed()) return do_kpis(result_dir);
        return 2;
    }
    catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    }
    catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 4;
    }
}

} // namespace evsim
