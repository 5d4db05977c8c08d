#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evsim/config.hpp"
#include "evsim/engine.hpp"
#include "evsim/metrics.hpp"

namespace evsim {

/// Serializers are pure and byte-stable: the same inputs always render the
/// same bytes. Doubles are fixed-point (4 decimals in JSON; 3 for loads and
/// 6 for money/energy in CSV), timestamps are ISO-8601.
std::string kpis_to_json(const KpiReport& kpi);
KpiReport parse_kpis_json(const std::string& text, const std::string& origin);
KpiReport load_kpis(const std::string& path);

std::string timeseries_to_csv(const SimulationResult& result);
std::string events_to_csv(const SimulationResult& result);
std::string comparison_to_csv(const std::vector<ComparisonRow>& rows);
std::string manifest_to_json(const ScenarioConfig& config, const SimulationResult& result);

/// Writes kpis.json, timeseries.csv, events.csv, run_manifest.json and,
/// when a comparison is given, compare.csv into out_dir (created if absent).
/// Each file is written atomically.
void write_reports(const ScenarioConfig& config, const SimulationResult& result,
                   const KpiReport& kpi, const std::string& out_dir,
                   const std::vector<ComparisonRow>* comparison = nullptr);

/// Rebuilds the KPI report from a written result directory (run_manifest.json,
/// timeseries.csv, events.csv). Values match the original up to CSV rounding.
KpiReport recompute_kpis(const std::string& result_dir);

} // namespace evsim
