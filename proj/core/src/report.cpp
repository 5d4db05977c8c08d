#include "evsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "evsim/csv.hpp"
#include "evsim/errors.hpp"
#include "evsim/time.hpp"
#include "evsim/version.hpp"
#include "json_util.hpp"

namespace evsim {

namespace {

std::string fixed(double v, int precision)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    std::string s = buf;
    if (s.find_first_of("123456789") == std::string::npos && s[0] == '-') s.erase(0, 1);
    return s;
}

std::string json_num(const std::optional<double>& v)
{
    return v ? fixed(*v, 4) : "null";
}

std::string json_int(const std::optional<std::int64_t>& v)
{
    return v ? std::to_string(*v) : "null";
}

std::string json_iso(const std::optional<std::int64_t>& hour)
{
    return hour ? "\"" + hour_iso(*hour) + "\"" : "null";
}

nlohmann::json parse_report_json(const std::string& text, const std::string& origin)
{
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false, true);
    if (j.is_discarded()) throw DataError(origin + ": not valid JSON");
    if (!j.is_object()) throw DataError(origin + ": expected a JSON object");
    return j;
}

const nlohmann::json& require_key(const nlohmann::json& j, const std::string& key,
                                  const std::string& origin)
{
    auto it = j.find(key);
    if (it == j.end()) throw DataError(origin + ": missing key '" + key + "'");
    return *it;
}

std::optional<double> opt_num(const nlohmann::json& j, const std::string& key,
                              const std::string& origin)
{
    const nlohmann::json& v = require_key(j, key, origin);
    if (v.is_null()) return std::nullopt;
    if (!v.is_number()) throw DataError(origin + ": '" + key + "' must be a number or null");
    return v.get<double>();
}

std::optional<std::int64_t> opt_int(const nlohmann::json& j, const std::string& key,
                                    const std::string& origin)
{
    const nlohmann::json& v = require_key(j, key, origin);
    if (v.is_null()) return std::nullopt;
    if (!v.is_number_integer()) throw DataError(origin + ": '" + key + "' must be an integer or null");
    return v.get<std::int64_t>();
}

std::int64_t iso_hour(const nlohmann::json& j, const std::string& key, const std::string& origin)
{
    const nlohmann::json& v = require_key(j, key, origin);
    if (!v.is_string()) throw DataError(origin + ": '" + key + "' must be an ISO timestamp");
    return SimTime::parse(v.get<std::string>()).hour_index();
}

std::optional<std::int64_t> opt_iso_hour(const nlohmann::json& j, const std::string& key,
                                         const std::string& origin)
{
    const nlohmann::json& v = require_key(j, key, origin);
    if (v.is_null()) return std::nullopt;
    if (!v.is_string()) throw DataError(origin + ": '" + key + "' must be an ISO timestamp or null");
    return SimTime::parse(v.get<std::string>()).hour_index();
}

} // namespace

std::string kpis_to_json(const KpiReport& kpi)
{
    std::string out;
    out.reserve(1024);
    out += "{\n";
    out += "  \"sim_start\": \"" + hour_iso(kpi.sim_start_hour) + "\",\n";
    out += "  \"sim_end\": \"" + hour_iso(kpi.sim_end_hour) + "\",\n";
    out += "  \"households\": " + std::to_string(kpi.households) + ",\n";
    out += "  \"first_overload\": " + json_iso(kpi.first_overload_hour) + ",\n";
    out += "  \"first_overload_days\": " + json_num(kpi.first_overload_days) + ",\n";
    out += "  \"overloads_following_year\": " + json_int(kpi.overloads_following_year) + ",\n";
    out += "  \"evs_at_first_overload\": " + json_int(kpi.evs_at_first_overload) + ",\n";
    out += "  \"avg_charging_cost_dkk_per_kwh\": " + json_num(kpi.avg_charging_cost_dkk_per_kwh) +
           ",\n";
    out += "  \"avg_electricity_bill_dkk\": " + json_num(kpi.avg_electricity_bill_dkk) + ",\n";
    out += "  \"avg_co2_kg\": " + json_num(kpi.avg_co2_kg) + ",\n";
    out += "  \"dissatisfaction_events\": " + std::to_string(kpi.dissatisfaction_events) + ",\n";
    out += "  \"load_factor\": " + json_num(kpi.load_factor) + ",\n";
    out += "  \"coincidence_factor\": " + json_num(kpi.coincidence_factor) + ",\n";
    out += "  \"dso_revenue_dkk\": " + fixed(kpi.dso_revenue_dkk, 4) + ",\n";
    out += "  \"reporting_window_start\": \"" + hour_iso(kpi.window_start_hour) + "\",\n";
    out += "  \"reporting_window_end\": \"" + hour_iso(kpi.window_end_hour) + "\"\n";
    out += "}\n";
    return out;
}

KpiReport parse_kpis_json(const std::string& text, const std::string& origin)
{
    const nlohmann::json j = parse_report_json(text, origin);
    KpiReport kpi;
    kpi.sim_start_hour = iso_hour(j, "sim_start", origin);
    kpi.sim_end_hour = iso_hour(j, "sim_end", origin);
    kpi.households = static_cast<int>(opt_int(j, "households", origin).value_or(0));
    kpi.first_overload_hour = opt_iso_hour(j, "first_overload", origin);
    kpi.first_overload_days = opt_num(j, "first_overload_days", origin);
    kpi.overloads_following_year = opt_int(j, "overloads_following_year", origin);
    kpi.evs_at_first_overload = opt_int(j, "evs_at_first_overload", origin);
    kpi.avg_charging_cost_dkk_per_kwh = opt_num(j, "avg_charging_cost_dkk_per_kwh", origin);
    kpi.avg_electricity_bill_dkk = opt_num(j, "avg_electricity_bill_dkk", origin);
    kpi.avg_co2_kg = opt_num(j, "avg_co2_kg", origin);
    kpi.dissatisfaction_events = opt_int(j, "dissatisfaction_events", origin).value_or(0);
    kpi.load_factor = opt_num(j, "load_factor", origin);
    kpi.coincidence_factor = opt_num(j, "coincidence_factor", origin);
    kpi.dso_revenue_dkk = opt_num(j, "dso_revenue_dkk", origin).value_or(0.0);
    kpi.window_start_hour = iso_hour(j, "reporting_window_start", origin);
    kpi.window_end_hour = iso_hour(j, "reporting_window_end", origin);
    return kpi;
}

KpiReport load_kpis(const std::string& path)
{
    return parse_kpis_json(read_file(path), path);
}

std::string timeseries_to_csv(const SimulationResult& result)
{
    const SystemSeries& s = result.series;
    std::string out;
    out.reserve(s.total_kw.size() * 120 + 200);
    out += "timestamp,total_kw,base_kw,ev_kw,plugged_evs,owned_evs,billed_dkk,"
           "billed_ev_owners_dkk,dso_tariff_dkk,ev_cost_dkk,ev_metered_kwh,co2_g,"
           "household_peak_sum_kw\n";
    char buf[320];
    for (std::size_t t = 0; t < s.total_kw.size(); ++t) {
        const std::int64_t h = s.start_hour + static_cast<std::int64_t>(t);
        std::snprintf(buf, sizeof buf,
                      "%s,%.3f,%.3f,%.3f,%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.3f\n",
                      hour_iso(h).c_str(), s.total_kw[t], s.base_kw[t], s.ev_kw[t],
                      s.plugged_evs[t], s.owned_evs[t], s.billed_dkk[t],
                      s.billed_ev_owners_dkk[t], s.dso_tariff_dkk[t], s.ev_cost_dkk[t],
                      s.ev_metered_kwh[t], s.co2_g[t], s.household_peak_sum_kw[t]);
        out += buf;
    }
    return out;
}

std::string events_to_csv(const SimulationResult& result)
{
    std::string out = "timestamp,kind,household_id,load_kw,capacity_kw,ev_count,required_kwh,"
                      "available_kwh\n";
    char buf[256];
    std::size_t oi = 0, di = 0;
    const auto& ovl = result.overloads;
    const auto& dis = result.dissatisfactions;
    while (oi < ovl.size() || di < dis.size()) {
        const bool take_dis =
            di < dis.size() && (oi >= ovl.size() || dis[di].hour <= ovl[oi].hour);
        if (take_dis) {
            const DissatisfactionEvent& e = dis[di++];
            std::snprintf(buf, sizeof buf, "%s,dissatisfaction,%d,,,,%.6f,%.6f\n",
                          hour_iso(e.hour).c_str(), e.household, e.required_kwh, e.available_kwh);
        }
        else {
            const OverloadEvent& e = ovl[oi++];
            std::snprintf(buf, sizeof buf, "%s,overload,,%.3f,%.3f,%d,,\n",
                          hour_iso(e.hour).c_str(), e.aggregate_load_kw, e.capacity_kw, e.ev_count);
        }
        out += buf;
    }
    return out;
}

std::string comparison_to_csv(const std::vector<ComparisonRow>& rows)
{
    std::string out = "kpi,baseline,variant,percent_diff\n";
    for (const ComparisonRow& row : rows) {
        out += row.kpi;
        out += ',';
        if (row.baseline) out += fixed(*row.baseline, 4);
        out += ',';
        if (row.variant) out += fixed(*row.variant, 4);
        out += ',';
        if (row.percent_diff) out += fixed(*row.percent_diff, 4);
        out += '\n';
    }
    return out;
}

std::string manifest_to_json(const ScenarioConfig& config, const SimulationResult& result)
{
    const ReportingConfig& rep = config.reporting;
    std::string out;
    out += "{\n";
    out += "  \"config_hash\": \"" + config.config_hash + "\",\n";
    out += "  \"version\": \"" + std::string(kVersion) + "\",\n";
    out += "  \"seed\": " + std::to_string(config.seed) + ",\n";
    out += "  \"sim_start\": \"" + config.horizon.start.iso() + "\",\n";
    out += "  \"sim_end\": \"" + config.horizon.end.iso() + "\",\n";
    out += "  \"households\": " + std::to_string(config.households) + ",\n";
    out += "  \"transformer_capacity_kw\": " + fixed(config.transformer_capacity_kw, 4) + ",\n";
    out += "  \"strategy\": \"" + strategy_label(config.strategy.options.kind) + "\",\n";
    out += "  \"use_partial_hours\": " +
           std::string(config.strategy.options.use_partial_hours ? "true" : "false") + ",\n";
    out += "  \"fallback_charging\": " +
           std::string(config.strategy.options.fallback_charging ? "true" : "false") + ",\n";
    out += "  \"emissions_present\": " + std::string(result.emissions_present ? "true" : "false") +
           ",\n";
    out += "  \"bill_scope\": \"" +
           std::string(rep.bill_scope == ReportingConfig::BillScope::EvOwners ? "ev_owners"
                                                                              : "all") +
           "\",\n";
    out += "  \"window_days\": " + std::to_string(rep.window_days) + ",\n";
    out += "  \"window_start\": " +
           (rep.window_start ? "\"" + rep.window_start->iso() + "\"" : "null") + "\n";
    out += "}\n";
    return out;
}

void write_reports(const ScenarioConfig& config, const SimulationResult& result,
                   const KpiReport& kpi, const std::string& out_dir,
                   const std::vector<ComparisonRow>* comparison)
{
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw DataError(out_dir + ": cannot create directory: " + ec.message());
    const std::filesystem::path dir(out_dir);
    write_file_atomic((dir / "kpis.json").string(), kpis_to_json(kpi));
    write_file_atomic((dir / "timeseries.csv").string(), timeseries_to_csv(result));
    write_file_atomic((dir / "events.csv").string(), events_to_csv(result));
    write_file_atomic((dir / "run_manifest.json").string(), manifest_to_json(config, result));
    if (comparison) {
        write_file_atomic((dir / "compare.csv").string(), comparison_to_csv(*comparison));
    }
}

KpiReport recompute_kpis(const std::string& result_dir)
{
    const std::filesystem::path dir(result_dir);
    const std::string manifest_path = (dir / "run_manifest.json").string();
    const nlohmann::json manifest =
        parse_report_json(read_file(manifest_path), manifest_path);

    SimulationResult result;
    result.horizon.start = SimTime::from_hour_index(iso_hour(manifest, "sim_start", manifest_path));
    result.horizon.end = SimTime::from_hour_index(iso_hour(manifest, "sim_end", manifest_path));
    result.households = static_cast<int>(
        opt_int(manifest, "households", manifest_path).value_or(0));
    result.capacity_kw = opt_num(manifest, "transformer_capacity_kw", manifest_path).value_or(0.0);
    {
        const nlohmann::json& v = require_key(manifest, "emissions_present", manifest_path);
        if (!v.is_boolean()) throw DataError(manifest_path + ": 'emissions_present' must be a bool");
        result.emissions_present = v.get<bool>();
    }
    ReportingConfig reporting;
    reporting.window_days =
        static_cast<int>(opt_int(manifest, "window_days", manifest_path).value_or(365));
    if (auto w = opt_iso_hour(manifest, "window_start", manifest_path)) {
        reporting.window_start = SimTime::from_hour_index(*w);
    }
    {
        const nlohmann::json& v = require_key(manifest, "bill_scope", manifest_path);
        const std::string scope = v.is_string() ? v.get<std::string>() : "";
        if (scope == "all") reporting.bill_scope = ReportingConfig::BillScope::All;
        else if (scope == "ev_owners") reporting.bill_scope = ReportingConfig::BillScope::EvOwners;
        else throw DataError(manifest_path + ": 'bill_scope' must be \"all\" or \"ev_owners\"");
    }

    const std::string ts_path = (dir / "timeseries.csv").string();
    const CsvTable ts = read_csv(
        ts_path, {"timestamp", "total_kw", "base_kw", "ev_kw", "plugged_evs", "owned_evs",
                  "billed_dkk", "billed_ev_owners_dkk", "dso_tariff_dkk", "ev_cost_dkk",
                  "ev_metered_kwh", "co2_g", "household_peak_sum_kw"});
    const std::int64_t start = result.horizon.start_hour();
    const std::int64_t hours = result.horizon.hours();
    if (static_cast<std::int64_t>(ts.rows.size()) != hours) {
        throw DataError(ts_path + ": expected " + std::to_string(hours) + " rows, found " +
                        std::to_string(ts.rows.size()));
    }
    SystemSeries& s = result.series;
    s.start_hour = start;
    const std::size_t n = ts.rows.size();
    s.total_kw.resize(n);
    s.base_kw.resize(n);
    s.ev_kw.resize(n);
    s.billed_dkk.resize(n);
    s.billed_ev_owners_dkk.resize(n);
    s.dso_tariff_dkk.resize(n);
    s.ev_cost_dkk.resize(n);
    s.ev_metered_kwh.resize(n);
    s.co2_g.resize(n);
    s.household_peak_sum_kw.resize(n);
    s.plugged_evs.resize(n);
    s.owned_evs.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        const std::int64_t h = csv_timestamp(ts, t, 0).hour_index();
        if (h != start + static_cast<std::int64_t>(t)) {
            csv_fail(ts, t, "expected " + hour_iso(start + static_cast<std::int64_t>(t)));
        }
        s.total_kw[t] = csv_double(ts, t, 1);
        s.base_kw[t] = csv_double(ts, t, 2);
        s.ev_kw[t] = csv_double(ts, t, 3);
        s.plugged_evs[t] = static_cast<int>(csv_int(ts, t, 4));
        s.owned_evs[t] = static_cast<int>(csv_int(ts, t, 5));
        s.billed_dkk[t] = csv_double(ts, t, 6);
        s.billed_ev_owners_dkk[t] = csv_double(ts, t, 7);
        s.dso_tariff_dkk[t] = csv_double(ts, t, 8);
        s.ev_cost_dkk[t] = csv_double(ts, t, 9);
        s.ev_metered_kwh[t] = csv_double(ts, t, 10);
        s.co2_g[t] = csv_double(ts, t, 11);
        s.household_peak_sum_kw[t] = csv_double(ts, t, 12);
    }
    const std::size_t days = static_cast<std::size_t>(result.horizon.days());
    result.day_peak_kw.assign(days, 0.0);
    result.day_household_peak_sum_kw.assign(days, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t day = t / static_cast<std::size_t>(kHoursPerDay);
        result.day_peak_kw[day] = std::max(result.day_peak_kw[day], s.total_kw[t]);
        result.day_household_peak_sum_kw[day] = s.household_peak_sum_kw[t];
    }

    const std::string ev_path = (dir / "events.csv").string();
    const CsvTable events = read_csv(
        ev_path, {"timestamp", "kind", "household_id", "load_kw", "capacity_kw", "ev_count",
                  "required_kwh", "available_kwh"},
        true);
    for (std::size_t r = 0; r < events.rows.size(); ++r) {
        const std::string& kind = events.rows[r][1];
        const std::int64_t h = csv_timestamp(events, r, 0).hour_index();
        if (kind == "overload") {
            OverloadEvent e;
            e.hour = h;
            e.aggregate_load_kw = csv_double(events, r, 3);
            e.capacity_kw = csv_double(events, r, 4);
            e.ev_count = static_cast<int>(csv_int(events, r, 5));
            result.overloads.push_back(e);
        }
        else if (kind == "dissatisfaction") {
            DissatisfactionEvent e;
            e.hour = h;
            e.household = static_cast<int>(csv_int(events, r, 2));
            e.required_kwh = csv_double(events, r, 6);
            e.available_kwh = csv_double(events, r, 7);
            result.dissatisfactions.push_back(e);
        }
        else {
            csv_fail(events, r, "unknown event kind '" + kind + "'");
        }
    }
    std::stable_sort(result.overloads.begin(), result.overloads.end(),
                     [](const OverloadEvent& a, const OverloadEvent& b) { return a.hour < b.hour; });

    return kpi_report(result, reporting);
}

} // namespace evsim
