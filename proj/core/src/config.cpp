#include "evsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "evsim/csv.hpp"
#include "evsim/errors.hpp"
#include "json_util.hpp"

namespace evsim {

nlohmann::json parse_json_text(const std::string& text, const std::string& origin)
{
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false, true); // comments allowed
    if (j.is_discarded()) throw ConfigError(origin + ": not valid JSON");
    return j;
}

std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

SimTime parse_time_key(JsonObj& o, const std::string& key)
{
    const std::string s = o.str(key);
    try {
        return SimTime::parse(s);
    }
    catch (const DataError& e) {
        o.fail(key, e.what());
    }
}

MonthDay parse_month_day(JsonObj& o, const std::string& key)
{
    const std::string s = o.str(key);
    unsigned m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%u-%u%c", &m, &d, &tail) != 2) {
        o.fail(key, "expected 'MM-DD', got '" + s + "'");
    }
    return MonthDay{m, d};
}

SampleDist parse_dist(JsonObj o)
{
    SampleDist d;
    const std::string kind = o.str("kind");
    if (kind == "point") {
        d.kind = SampleDist::Kind::Point;
        d.a = o.num("value");
    }
    else if (kind == "uniform") {
        d.kind = SampleDist::Kind::Uniform;
        d.a = o.num("lo");
        d.b = o.num("hi");
    }
    else if (kind == "normal") {
        d.kind = SampleDist::Kind::Normal;
        d.a = o.num("mean");
        d.b = o.num("sd");
    }
    else if (kind == "lognormal") {
        d.kind = SampleDist::Kind::LogNormal;
        d.a = o.num("log_mean");
        d.b = o.num("log_sd");
    }
    else {
        o.fail("kind", "expected point, uniform, normal or lognormal");
    }
    d.lo = o.num("min", d.lo);
    d.hi = o.num("max", d.hi);
    o.finish();
    d.validate(o.path());
    return d;
}

DayPattern parse_day_pattern(JsonObj o)
{
    DayPattern p;
    p.departure_minutes = parse_dist(o.child("departure_minutes"));
    p.arrival_minutes = parse_dist(o.child("arrival_minutes"));
    p.distance_km = parse_dist(o.child("distance_km"));
    o.finish();
    return p;
}

DrivingPatternSpec parse_driving(JsonObj o)
{
    DrivingPatternSpec spec;
    spec.weekday = parse_day_pattern(o.child("weekday"));
    spec.weekend = parse_day_pattern(o.child("weekend"));
    o.finish();
    return spec;
}

TariffSchedule parse_tariff(JsonObj& parent, const std::string& key)
{
    const nlohmann::json& j = parent.raw(key);
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "tm3_default") return TariffSchedule::tm3_default();
        parent.fail(key, "unknown tariff preset '" + name + "' (only tm3_default)");
    }
    JsonObj o(j, parent.key_path(key));
    TariffSchedule schedule;
    schedule.label = o.str("label", "custom");
    const nlohmann::json& seasons = o.raw("seasons");
    if (!seasons.is_array() || seasons.empty()) o.fail("seasons", "expected a non-empty array");
    for (std::size_t i = 0; i < seasons.size(); ++i) {
        JsonObj so(seasons[i], o.key_path("seasons[" + std::to_string(i) + "]"));
        TariffSeason season;
        season.from = parse_month_day(so, "from");
        season.to = parse_month_day(so, "to");
        const nlohmann::json& periods = so.raw("periods");
        if (!periods.is_array() || periods.empty()) so.fail("periods", "expected a non-empty array");
        for (std::size_t p = 0; p < periods.size(); ++p) {
            JsonObj po(periods[p], so.key_path("periods[" + std::to_string(p) + "]"));
            TariffPeriod period;
            period.from_hour = static_cast<int>(po.integer("from_hour"));
            period.to_hour = static_cast<int>(po.integer("to_hour"));
            period.rate_dkk_per_kwh = po.num("rate_dkk_per_kwh");
            po.finish();
            season.periods.push_back(period);
        }
        so.finish();
        schedule.seasons.push_back(std::move(season));
    }
    o.finish();
    schedule.validate();
    return schedule;
}

StrategyConfig parse_strategy(JsonObj& parent, const std::string& key)
{
    StrategyConfig cfg;
    const nlohmann::json* j = parent.raw_opt(key);
    if (!j) return cfg; // traditional defaults
    if (j->is_string()) {
        cfg.options.kind = parse_strategy_kind(j->get<std::string>());
        return cfg;
    }
    JsonObj o(*j, parent.key_path(key));
    cfg.options.kind = parse_strategy_kind(o.str("kind"));
    cfg.options.use_partial_hours = o.boolean("use_partial_hours", false);
    cfg.options.fallback_charging = o.boolean("fallback_charging", true);
    cfg.prefs.desired_soc = o.num("desired_soc", 1.0);
    cfg.prefs.soc_cap = o.num_opt("soc_cap");
    cfg.prefs.min_soc_floor = o.num_opt("min_soc_floor");
    cfg.prefs.distance_optimization = o.boolean("distance_optimization", false);
    o.finish();
    return cfg;
}

AdoptionConfig parse_adoption_block(JsonObj& parent, const std::string& key)
{
    const nlohmann::json* j = parent.raw_opt(key);
    if (!j) return AdoptionConfig{};
    JsonObj o(*j, parent.key_path(key));
    // model_mix is a free-form name->weight map; pull it out first.
    AdoptionConfig cfg;
    if (const nlohmann::json* mix = o.raw_opt("model_mix")) {
        if (!mix->is_object()) o.fail("model_mix", "expected an object of model: weight");
        for (auto it = mix->begin(); it != mix->end(); ++it) {
            if (!it.value().is_number()) o.fail("model_mix", "weights must be numbers");
            cfg.model_mix[it.key()] = it.value().get<double>();
        }
    }
    const std::string kind = o.str("kind", "logistic");
    if (kind == "logistic") {
        cfg.kind = AdoptionConfig::Kind::Logistic;
        cfg.max_evs = o.num("max_evs", cfg.max_evs);
        cfg.growth_per_month = o.num("growth_per_month", cfg.growth_per_month);
        cfg.midpoint_month = o.num("midpoint_month", cfg.midpoint_month);
        if (cfg.max_evs < 0.0) o.fail("max_evs", "must be >= 0");
        if (!(cfg.growth_per_month > 0.0)) o.fail("growth_per_month", "must be > 0");
    }
    else if (kind == "table") {
        cfg.kind = AdoptionConfig::Kind::Table;
        const nlohmann::json& rows = o.raw("rows");
        if (!rows.is_array()) o.fail("rows", "expected an array of [\"YYYY-MM\", count] pairs");
        for (const nlohmann::json& row : rows) {
            if (!row.is_array() || row.size() != 2 || !row[0].is_string() ||
                !row[1].is_number_integer()) {
                o.fail("rows", "each row must be [\"YYYY-MM\", count]");
            }
            cfg.table.emplace_back(row[0].get<std::string>(), row[1].get<int>());
        }
        if (cfg.table.empty()) o.fail("rows", "needs at least one row");
    }
    else {
        o.fail("kind", "expected logistic or table");
    }
    o.finish();
    return cfg;
}

ReportingConfig parse_reporting(JsonObj& parent, const std::string& key)
{
    ReportingConfig cfg;
    const nlohmann::json* j = parent.raw_opt(key);
    if (!j) return cfg;
    JsonObj o(*j, parent.key_path(key));
    cfg.window_days = static_cast<int>(o.integer("window_days", cfg.window_days));
    if (cfg.window_days < 1) o.fail("window_days", "must be >= 1");
    if (o.has("window_start")) cfg.window_start = parse_time_key(o, "window_start");
    const std::string scope = o.str("bill_scope", "all");
    if (scope == "all") cfg.bill_scope = ReportingConfig::BillScope::All;
    else if (scope == "ev_owners") cfg.bill_scope = ReportingConfig::BillScope::EvOwners;
    else o.fail("bill_scope", "expected all or ev_owners");
    const std::string rule = o.str("dissatisfaction_rule", "energy_shortfall");
    if (rule != "energy_shortfall") o.fail("dissatisfaction_rule", "expected energy_shortfall");
    o.finish();
    return cfg;
}

std::vector<EvModel> parse_catalog_array(const nlohmann::json& arr, const std::string& path)
{
    if (!arr.is_array() || arr.empty()) throw ConfigError(path + ": expected a non-empty array");
    std::vector<EvModel> catalog;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        JsonObj mo(arr[i], path + "[" + std::to_string(i) + "]");
        EvModel m;
        m.name = mo.str("name");
        m.battery_capacity_kwh = mo.num("battery_capacity_kwh");
        m.consumption_kwh_per_km = mo.num("consumption_kwh_per_km");
        m.max_charge_power_kw = mo.num("max_charge_power_kw");
        mo.finish();
        m.validate();
        catalog.push_back(std::move(m));
    }
    return catalog;
}

BaseLoadShape parse_base_shape(JsonObj& parent, const std::string& key)
{
    BaseLoadShape s;
    const nlohmann::json* j = parent.raw_opt(key);
    if (!j) return s;
    JsonObj o(*j, parent.key_path(key));
    s.scale_kw = o.num("scale_kw", s.scale_kw);
    s.household_spread = o.num("household_spread", s.household_spread);
    s.seasonal_amplitude = o.num("seasonal_amplitude", s.seasonal_amplitude);
    s.weekend_uplift = o.num("weekend_uplift", s.weekend_uplift);
    s.noise = o.num("noise", s.noise);
    o.finish();
    return s;
}

SpotShape parse_spot_shape(JsonObj& parent, const std::string& key)
{
    SpotShape s;
    const nlohmann::json* j = parent.raw_opt(key);
    if (!j) return s;
    JsonObj o(*j, parent.key_path(key));
    s.mean_dkk_per_kwh = o.num("mean_dkk_per_kwh", s.mean_dkk_per_kwh);
    s.daily_amplitude = o.num("daily_amplitude", s.daily_amplitude);
    s.seasonal_amplitude = o.num("seasonal_amplitude", s.seasonal_amplitude);
    s.noise = o.num("noise", s.noise);
    o.finish();
    return s;
}

EmissionShape parse_emission_shape(JsonObj& parent, const std::string& key)
{
    EmissionShape s;
    const nlohmann::json* j = parent.raw_opt(key);
    if (!j) return s;
    JsonObj o(*j, parent.key_path(key));
    s.enabled = o.boolean("enabled", s.enabled);
    s.mean_g_per_kwh = o.num("mean_g_per_kwh", s.mean_g_per_kwh);
    s.daily_amplitude = o.num("daily_amplitude", s.daily_amplitude);
    s.seasonal_amplitude = o.num("seasonal_amplitude", s.seasonal_amplitude);
    s.noise = o.num("noise", s.noise);
    o.finish();
    return s;
}

/// Shape blocks shared by the inline scenario form and the generator file.
void parse_synthetic_shapes(JsonObj& o, SyntheticSpec& spec)
{
    spec.base_load = parse_base_shape(o, "base_load");
    spec.spot = parse_spot_shape(o, "spot_prices");
    spec.emissions = parse_emission_shape(o, "emissions");
    if (const nlohmann::json* cat = o.raw_opt("ev_catalog")) {
        spec.ev_catalog = parse_catalog_array(*cat, o.key_path("ev_catalog"));
    }
}

std::variant<SyntheticSpec, FileInputsConfig> parse_inputs(JsonObj& parent, const std::string& key,
                                                           const HorizonSpec& horizon,
                                                           int households)
{
    const nlohmann::json* j = parent.raw_opt(key);
    if (!j) {
        SyntheticSpec spec;
        spec.horizon = horizon;
        spec.households = households;
        return spec;
    }
    JsonObj o(*j, parent.key_path(key));
    const std::string kind = o.str("kind", "synthetic");
    if (kind == "synthetic") {
        SyntheticSpec spec;
        spec.horizon = horizon;
        spec.households = households;
        parse_synthetic_shapes(o, spec);
        o.finish();
        return spec;
    }
    if (kind == "files") {
        FileInputsConfig files;
        files.base_load = o.str("base_load");
        files.spot_prices = o.str("spot_prices");
        files.emissions = o.str("emissions", "");
        files.ev_catalog = o.str("ev_catalog");
        files.repeat_years = o.boolean("repeat_years", false);
        o.finish();
        return files;
    }
    o.fail("kind", "expected synthetic or files");
}

} // namespace

void ScenarioConfig::validate() const
{
    horizon.validate();
    if (households <= 0) throw ConfigError("households: must be > 0");
    if (!(transformer_capacity_kw > 0.0)) throw ConfigError("transformer_capacity_kw: must be > 0");
    strategy.prefs.validate();
    tariff.validate();
    charge_point.validate();
    if (!(initial_soc >= 0.0 && initial_soc <= 1.0)) throw ConfigError("initial_soc: must be in [0, 1]");
    if (fixed_addons_dkk_per_kwh < 0.0) throw ConfigError("fixed_addons_dkk_per_kwh: must be >= 0");
    if (reporting.window_days < 1) throw ConfigError("reporting.window_days: must be >= 1");
    if (reporting.window_start && !reporting.window_start->on_hour()) {
        throw ConfigError("reporting.window_start: must be hour-aligned");
    }
    if (const auto* spec = std::get_if<SyntheticSpec>(&inputs)) spec->validate();
}

ScenarioConfig load_scenario(const std::string& path)
{
    std::string text;
    try {
        text = read_file(path);
    }
    catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    const nlohmann::json root = parse_json_text(text, path);
    JsonObj o(root, "config");

    ScenarioConfig cfg;
    cfg.horizon.start = parse_time_key(o, "sim_start");
    cfg.horizon.end = parse_time_key(o, "sim_end");
    cfg.horizon.validate();
    cfg.households = static_cast<int>(o.integer("households", 126));
    cfg.transformer_capacity_kw = o.num("transformer_capacity_kw");
    const std::int64_t seed = o.integer("seed", 1);
    if (seed < 0) o.fail("seed", "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.strategy = parse_strategy(o, "strategy");
    cfg.tariff = o.has("tariff") ? parse_tariff(o, "tariff") : TariffSchedule::tm3_default();
    cfg.fixed_addons_dkk_per_kwh = o.num("fixed_addons_dkk_per_kwh", 0.0);
    if (auto cp = o.child_opt("charge_point")) {
        cfg.charge_point.power_kw = cp->num("power_kw", cfg.charge_point.power_kw);
        cfg.charge_point.efficiency = cp->num("efficiency", cfg.charge_point.efficiency);
        cp->finish();
    }
    cfg.initial_soc = o.num("initial_soc", 0.5);
    const std::string policy = o.str("plug_in_policy", "always");
    if (policy == "always") cfg.plug_in_policy = ScenarioConfig::PlugInPolicy::Always;
    else if (policy == "when_below_target") {
        cfg.plug_in_policy = ScenarioConfig::PlugInPolicy::WhenBelowTarget;
    }
    else {
        o.fail("plug_in_policy", "expected always or when_below_target");
    }
    cfg.adoption = parse_adoption_block(o, "adoption");
    if (o.has("driving")) cfg.driving = parse_driving(o.child("driving"));
    cfg.inputs = parse_inputs(o, "inputs", cfg.horizon, cfg.households);
    cfg.reporting = parse_reporting(o, "reporting");
    cfg.trace_households = o.boolean("trace_households", false);
    o.finish();

    cfg.config_hash = fnv1a_hex(text);
    cfg.validate();
    return cfg;
}

SyntheticSpec load_synthetic_spec(const std::string& path)
{
    std::string text;
    try {
        text = read_file(path);
    }
    catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    const nlohmann::json root = parse_json_text(text, path);
    JsonObj o(root, "spec");
    SyntheticSpec spec;
    spec.horizon.start = parse_time_key(o, "sim_start");
    spec.horizon.end = parse_time_key(o, "sim_end");
    spec.households = static_cast<int>(o.integer("households", 126));
    parse_synthetic_shapes(o, spec);
    o.finish();
    spec.validate();
    return spec;
}

AdoptionCurve build_adoption_curve(const AdoptionConfig& cfg, const HorizonSpec& horizon,
                                   const std::vector<EvModel>& catalog, int households)
{
    AdoptionCurve curve;
    curve.start_month = horizon.start.month_index();
    const std::int64_t last_month = horizon.end.plus_minutes(-1).month_index();
    const std::size_t months = static_cast<std::size_t>(last_month - curve.start_month + 1);

    if (cfg.kind == AdoptionConfig::Kind::Logistic) {
        for (std::size_t m = 0; m < months; ++m) {
            const double x = cfg.max_evs /
                             (1.0 + std::exp(-cfg.growth_per_month *
                                             (static_cast<double>(m) - cfg.midpoint_month)));
            curve.cumulative.push_back(static_cast<int>(std::floor(x + 0.5)));
        }
    }
    else {
        std::vector<std::pair<std::int64_t, int>> rows;
        for (const auto& [ym, count] : cfg.table) {
            int y = 0;
            unsigned mo = 0;
            char tail = 0;
            if (std::sscanf(ym.c_str(), "%d-%u%c", &y, &mo, &tail) != 2 || mo < 1 || mo > 12) {
                throw ConfigError("adoption.rows: expected 'YYYY-MM', got '" + ym + "'");
            }
            rows.emplace_back(static_cast<std::int64_t>(y) * 12 + (mo - 1) - 1970LL * 12, count);
        }
        std::sort(rows.begin(), rows.end());
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].first == rows[i - 1].first) {
                throw ConfigError("adoption.rows: duplicate month");
            }
        }
        for (std::size_t m = 0; m < months; ++m) {
            const std::int64_t month = curve.start_month + static_cast<std::int64_t>(m);
            int value = 0;
            for (const auto& [rm, count] : rows) {
                if (rm <= month) value = count;
                else break;
            }
            curve.cumulative.push_back(value);
        }
    }

    if (cfg.model_mix.empty()) {
        curve.model_weights.assign(catalog.size(), 1.0);
    }
    else {
        curve.model_weights.assign(catalog.size(), 0.0);
        for (const auto& [name, weight] : cfg.model_mix) {
            auto it = std::find_if(catalog.begin(), catalog.end(),
                                   [&](const EvModel& m) { return m.name == name; });
            if (it == catalog.end()) {
                throw ConfigError("adoption.model_mix: unknown model '" + name + "'");
            }
            curve.model_weights[static_cast<std::size_t>(it - catalog.begin())] = weight;
        }
    }
    curve.validate(households, catalog.size());
    return curve;
}

InputBundle build_inputs(const ScenarioConfig& config)
{
    InputBundle bundle;
    if (const auto* files = std::get_if<FileInputsConfig>(&config.inputs)) {
        bundle.ev_catalog = load_ev_catalog(files->ev_catalog);
        bundle.spot = load_hourly_series(files->spot_prices, "dkk_per_kwh", "spot prices",
                                         files->repeat_years, config.horizon, true);
        if (!files->emissions.empty()) {
            bundle.emissions = load_hourly_series(files->emissions, "gco2_per_kwh", "emissions",
                                                  files->repeat_years, config.horizon, false);
        }
        bundle.base_load =
            load_base_load(files->base_load, config.households, files->repeat_years, config.horizon);
        bundle.adoption =
            build_adoption_curve(config.adoption, config.horizon, bundle.ev_catalog, config.households);
        bundle.driving = config.driving;
    }
    else {
        SyntheticSpec spec = std::get<SyntheticSpec>(config.inputs);
        spec.horizon = config.horizon;
        spec.households = config.households;
        if (spec.ev_catalog.empty()) spec.ev_catalog = default_ev_catalog();
        const AdoptionCurve adoption =
            build_adoption_curve(config.adoption, config.horizon, spec.ev_catalog, config.households);
        bundle = generate_synthetic(spec, adoption, config.driving, config.seed);
    }
    bundle.validate(config.horizon, config.households);
    return bundle;
}

} // namespace evsim
