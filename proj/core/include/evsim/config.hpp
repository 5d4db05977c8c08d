#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "evsim/domain.hpp"
#include "evsim/inputs.hpp"
#include "evsim/pricing.hpp"
#include "evsim/strategy.hpp"
#include "evsim/synthetic.hpp"

namespace evsim {

struct StrategyConfig {
    StrategyOptions options;
    EvUserPreferences prefs;
};

struct AdoptionConfig {
    enum class Kind { Logistic, Table };
    Kind kind = Kind::Logistic;
    // logistic: cumulative(m) = round(max_evs / (1 + e^{-growth (m - midpoint)}))
    double max_evs = 88.0;
    double growth_per_month = 0.08;
    double midpoint_month = 99.2; // months from sim start
    std::vector<std::pair<std::string, int>> table; // ("YYYY-MM", cumulative), step-held
    std::map<std::string, double> model_mix;        // empty = uniform over the catalog
};

struct ReportingConfig {
    enum class BillScope { All, EvOwners };
    enum class DissatisfactionRule { EnergyShortfall };
    int window_days = 365;
    std::optional<SimTime> window_start; // default: the hour after the first overload
    BillScope bill_scope = BillScope::All;
    DissatisfactionRule dissatisfaction_rule = DissatisfactionRule::EnergyShortfall;
};

struct FileInputsConfig {
    std::string base_load;
    std::string spot_prices;
    std::string emissions; // empty = none
    std::string ev_catalog;
    bool repeat_years = false;
};

struct ScenarioConfig {
    HorizonSpec horizon;
    int households = 126;
    double transformer_capacity_kw = 0.0;
    std::uint64_t seed = 1;
    StrategyConfig strategy;
    TariffSchedule tariff = TariffSchedule::tm3_default();
    double fixed_addons_dkk_per_kwh = 0.0;
    ChargePointSpec charge_point;
    double initial_soc = 0.5;
    enum class PlugInPolicy { Always, WhenBelowTarget };
    PlugInPolicy plug_in_policy = PlugInPolicy::Always;
    AdoptionConfig adoption;
    DrivingPatternSpec driving = DrivingPatternSpec::commuter_default();
    std::variant<SyntheticSpec, FileInputsConfig> inputs; // synthetic by default
    ReportingConfig reporting;
    bool trace_households = false;
    std::string config_hash = "0000000000000000"; // FNV-1a of the config file bytes

    void validate() const; // throws ConfigError
};

/// Reads, validates and default-fills a scenario; every error names the
/// offending key path.
ScenarioConfig load_scenario(const std::string& path);

/// FNV-1a 64-bit, hex-encoded; the manifest identity of a config file.
std::string fnv1a_hex(const std::string& bytes);

/// Materializes the adoption curve over the horizon against a catalog.
AdoptionCurve build_adoption_curve(const AdoptionConfig& cfg, const HorizonSpec& horizon,
                                   const std::vector<EvModel>& catalog, int households);

/// Loads or generates the full input bundle for a scenario and validates it.
InputBundle build_inputs(const ScenarioConfig& config);

} // namespace evsim
