#pragma once

// Scenario configuration file (JSON).
//
// Input file paths are resolved against the directory of the config file.
// Every default is materialized by to_json, so a resolved config describes
// a run completely.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "outval/hazard.hpp"
#include "outval/outage.hpp"
#include "outval/population.hpp"
#include "outval/thermal.hpp"
#include "outval/valuation.hpp"

namespace outval
{

struct ScenarioConfig
{
    std::uint64_t seed = 1;
    std::uint32_t trials = 1000;
    unsigned threads = 1;
    Scenario scenario = Scenario::base;

    std::optional<std::filesystem::path> population_file;
    PopulationSpec population_spec;
    std::uint64_t population_seed = 1;

    std::filesystem::path weather_file;
    TimeWindow window;
    long long dt = 300;

    std::uint64_t outage_seed = 1;
    double fault_fraction = 0.034;
    std::optional<std::vector<BuildingId>> shed_ids;
    double shed_fraction = 0.0;  // of residential buildings, when shed_ids is unset
    int n_groups = 3;
    AvailabilitySeries availability;

    ThermalParams thermal;
    HazardConfig hazard;
    ValuationParams valuation;
    std::optional<double> beta_wi;  // unset: largest building sum of WI over all scenarios
    bool cic_acknowledged = false;

    std::filesystem::path output_dir = "out";
    bool write_traces = true;
    std::size_t histogram_bins = 50;
};

/// Throws ConfigError naming the file and field on invalid content.
ScenarioConfig load_config(std::filesystem::path const& path);
ScenarioConfig parse_config(nlohmann::json const& j, std::filesystem::path const& base_dir,
                            std::string const& source_name);

nlohmann::json to_json(ScenarioConfig const& cfg);

/// SHA-256 over the resolved config with output location and thread count
/// removed and input paths replaced by their content digests.
std::string config_hash(ScenarioConfig const& cfg);

}  // namespace outval
