#include "evsim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "evsim/time.hpp"

namespace evsim {

namespace {

double window_sum(const SystemSeries& s, const std::vector<double>& values, std::int64_t from_hour,
                  std::int64_t end_hour)
{
    double total = 0.0;
    for (std::int64_t h = from_hour; h < end_hour; ++h) {
        total += values[static_cast<std::size_t>(h - s.start_hour)];
    }
    return total;
}

std::optional<double> as_double(const std::optional<std::int64_t>& v)
{
    if (!v) return std::nullopt;
    return static_cast<double>(*v);
}

ComparisonRow make_row(std::string name, std::optional<double> baseline, std::optional<double> variant)
{
    ComparisonRow row{std::move(name), baseline, variant, std::nullopt};
    if (baseline && variant && *baseline != 0.0) {
        row.percent_diff = (*variant - *baseline) / *baseline * 100.0;
    }
    return row;
}

} // namespace

std::optional<std::int64_t> first_overload_hour(const SimulationResult& result)
{
    if (result.overloads.empty()) return std::nullopt;
    return result.overloads.front().hour;
}

std::int64_t count_overloads(const std::vector<OverloadEvent>& events, std::int64_t from_hour,
                             std::int64_t end_hour)
{
    std::int64_t n = 0;
    for (const OverloadEvent& e : events) {
        if (e.hour >= from_hour && e.hour < end_hour) ++n;
    }
    return n;
}

std::optional<double> load_factor(const SystemSeries& series, std::int64_t from_hour,
                                  std::int64_t end_hour)
{
    if (from_hour >= end_hour) return std::nullopt;
    double sum = 0.0;
    double peak = 0.0;
    for (std::int64_t h = from_hour; h < end_hour; ++h) {
        const double x = series.total_kw[static_cast<std::size_t>(h - series.start_hour)];
        sum += x;
        peak = std::max(peak, x);
    }
    if (peak <= 0.0) return std::nullopt;
    return sum / static_cast<double>(end_hour - from_hour) / peak;
}

std::optional<double> coincidence_factor(const SimulationResult& result, std::int64_t hour)
{
    const std::int64_t start = result.horizon.start_hour();
    const std::int64_t end = result.horizon.end_hour();
    if (hour < start || hour >= end) return std::nullopt;
    const std::int64_t day = (hour - start) / kHoursPerDay;
    const std::int64_t last = std::min(start + (day + 1) * kHoursPerDay, end) - 1;
    const double peak_sum = result.series.household_peak_sum_kw[static_cast<std::size_t>(last - start)];
    if (peak_sum <= 0.0) return std::nullopt;
    return result.day_peak_kw[static_cast<std::size_t>(day)] / peak_sum;
}

KpiReport kpi_report(const SimulationResult& result, const ReportingConfig& reporting)
{
    const std::int64_t start = result.horizon.start_hour();
    const std::int64_t end = result.horizon.end_hour();
    const std::int64_t window_hours = static_cast<std::int64_t>(reporting.window_days) * kHoursPerDay;

    KpiReport kpi;
    kpi.sim_start_hour = start;
    kpi.sim_end_hour = end;
    kpi.households = result.households;

    kpi.first_overload_hour = first_overload_hour(result);
    if (kpi.first_overload_hour) {
        const std::int64_t t0 = *kpi.first_overload_hour;
        kpi.first_overload_days = static_cast<double>(t0 - start) / kHoursPerDay;
        kpi.overloads_following_year =
            count_overloads(result.overloads, t0 + 1, std::min(end, t0 + 1 + 365 * kHoursPerDay));
        kpi.evs_at_first_overload = result.series.owned_evs[static_cast<std::size_t>(t0 - start)];
        kpi.coincidence_factor = coincidence_factor(result, t0);
    }

    std::int64_t w0;
    if (reporting.window_start) {
        w0 = reporting.window_start->hour_index();
    }
    else if (kpi.first_overload_hour) {
        w0 = *kpi.first_overload_hour + 1;
    }
    else {
        w0 = std::max(start, end - window_hours);
    }
    w0 = std::clamp(w0, start, end);
    const std::int64_t w1 = std::min(end, w0 + window_hours);
    kpi.window_start_hour = w0;
    kpi.window_end_hour = w1;

    const SystemSeries& s = result.series;
    const std::int64_t owner_hour = (w1 > w0 ? w1 : end) - 1;
    const int owners = s.owned_evs[static_cast<std::size_t>(owner_hour - start)];

    if (reporting.bill_scope == ReportingConfig::BillScope::EvOwners) {
        if (owners > 0) {
            kpi.avg_electricity_bill_dkk = window_sum(s, s.billed_ev_owners_dkk, w0, w1) / owners;
        }
    }
    else if (result.households > 0) {
        kpi.avg_electricity_bill_dkk = window_sum(s, s.billed_dkk, w0, w1) / result.households;
    }
    if (result.emissions_present && owners > 0) {
        kpi.avg_co2_kg = window_sum(s, s.co2_g, w0, w1) / 1000.0 / owners;
    }
    kpi.dso_revenue_dkk = window_sum(s, s.dso_tariff_dkk, w0, w1);
    kpi.load_factor = load_factor(s, w0, w1);

    double run_cost = 0.0;
    double run_energy = 0.0;
    for (std::size_t t = 0; t < s.ev_cost_dkk.size(); ++t) {
        run_cost += s.ev_cost_dkk[t];
        run_energy += s.ev_metered_kwh[t];
    }
    if (run_energy > 0.0) kpi.avg_charging_cost_dkk_per_kwh = run_cost / run_energy;
    kpi.dissatisfaction_events = static_cast<std::int64_t>(result.dissatisfactions.size());
    return kpi;
}

std::vector<ComparisonRow> compare(const KpiReport& baseline, const KpiReport& variant)
{
    std::vector<ComparisonRow> rows;
    rows.push_back(make_row("first_overload_days", baseline.first_overload_days,
                            variant.first_overload_days));
    rows.push_back(make_row("overloads_following_year", as_double(baseline.overloads_following_year),
                            as_double(variant.overloads_following_year)));
    rows.push_back(make_row("evs_at_first_overload", as_double(baseline.evs_at_first_overload),
                            as_double(variant.evs_at_first_overload)));
    rows.push_back(make_row("avg_charging_cost_dkk_per_kwh", baseline.avg_charging_cost_dkk_per_kwh,
                            variant.avg_charging_cost_dkk_per_kwh));
    rows.push_back(make_row("avg_electricity_bill_dkk", baseline.avg_electricity_bill_dkk,
                            variant.avg_electricity_bill_dkk));
    rows.push_back(make_row("avg_co2_kg", baseline.avg_co2_kg, variant.avg_co2_kg));
    rows.push_back(make_row("dissatisfaction_events",
                            static_cast<double>(baseline.dissatisfaction_events),
                            static_cast<double>(variant.dissatisfaction_events)));
    rows.push_back(make_row("load_factor", baseline.load_factor, variant.load_factor));
    rows.push_back(make_row("coincidence_factor", baseline.coincidence_factor,
                            variant.coincidence_factor));
    rows.push_back(make_row("dso_revenue_dkk", baseline.dso_revenue_dkk, variant.dso_revenue_dkk));
    return rows;
}

} // namespace evsim
