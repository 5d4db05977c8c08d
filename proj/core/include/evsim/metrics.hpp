#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evsim/config.hpp"
#include "evsim/engine.hpp"

namespace evsim {

/// Headline indicators for one run. Fields are absent (not zero) when the
/// run gives them no meaning, e.g. overload-derived values without an
/// overload, or CO2 without an emission series. Date-like values carry a
/// days-from-start counterpart so runs with different horizons compare.
struct KpiReport {
    std::int64_t sim_start_hour = 0;
    std::int64_t sim_end_hour = 0;
    int households = 0;

    std::optional<std::int64_t> first_overload_hour;
    std::optional<double> first_overload_days;
    std::optional<std::int64_t> overloads_following_year;
    std::optional<std::int64_t> evs_at_first_overload;

    std::optional<double> avg_charging_cost_dkk_per_kwh; // whole run
    std::optional<double> avg_electricity_bill_dkk;      // reporting window
    std::optional<double> avg_co2_kg;                    // reporting window, per EV owner
    std::int64_t dissatisfaction_events = 0;             // whole run
    std::optional<double> load_factor;                   // reporting window
    std::optional<double> coincidence_factor;            // first-overload day
    double dso_revenue_dkk = 0.0;                        // reporting window

    std::int64_t window_start_hour = 0;
    std::int64_t window_end_hour = 0;
};

std::optional<std::int64_t> first_overload_hour(const SimulationResult& result);

/// Overload events with from_hour <= hour < end_hour. Events are one per
/// overloaded hour, so this is also a count of overloaded hours.
std::int64_t count_overloads(const std::vector<OverloadEvent>& events, std::int64_t from_hour,
                             std::int64_t end_hour);

/// Mean aggregate load divided by peak aggregate load over [from_hour, end_hour).
std::optional<double> load_factor(const SystemSeries& series, std::int64_t from_hour,
                                  std::int64_t end_hour);

/// Aggregate day peak divided by the sum of individual household day peaks,
/// for the day containing `hour`.
std::optional<double> coincidence_factor(const SimulationResult& result, std::int64_t hour);

/// Windowed KPIs use [window_start, window_start + window_days*24h) clipped
/// to the horizon. Without an explicit window start the window opens one
/// hour after the first overload, or covers the final window_days of the
/// horizon when no overload occurred.
KpiReport kpi_report(const SimulationResult& result, const ReportingConfig& reporting);

struct ComparisonRow {
    std::string kpi;
    std::optional<double> baseline;
    std::optional<double> variant;
    std::optional<double> percent_diff; // present when both sides exist and baseline != 0
};

/// Rows in a fixed order; percent_diff = (variant - baseline) / baseline * 100.
std::vector<ComparisonRow> compare(const KpiReport& baseline, const KpiReport& variant);

} // namespace evsim
