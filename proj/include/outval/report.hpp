#pragma once

// End-to-end runs and the artifacts they leave in an output directory.

#include <filesystem>
#include <string>
#include <vector>

#include "outval/config.hpp"
#include "outval/valuation.hpp"
#include "outval/weather.hpp"

namespace outval
{

/// Weather for the event window at the configured step.
WeatherSeries prepare_weather(ScenarioConfig const& cfg);
/// Loaded or synthesized population; throws ConfigError if it fails validation.
Population prepare_population(ScenarioConfig const& cfg);
PowerScheduleSet build_schedule(ScenarioConfig const& cfg, Scenario scenario, Population const& pop);

/// Largest per-building sum of WI across all four scenarios (1 if nothing freezes).
double auto_beta_wi(ScenarioConfig const& cfg, Population const& pop, WeatherSeries const& weather);

struct RunResult
{
    ScenarioBundle bundle;
    std::vector<CostBreakdown> trials;
    Summary summary;
    double mean_rr = 0.0;              // over all buildings
    double mean_rr_residential = 0.0;  // over residential buildings
    std::string config_hash;
    std::string population_hash;
};

/// Runs the configured scenario without touching the filesystem beyond inputs.
RunResult execute(ScenarioConfig const& cfg);

/// execute() plus every artifact written under cfg.output_dir.
RunResult run_scenario(ScenarioConfig const& cfg);

struct ComparisonRow
{
    std::string metric;
    std::vector<double> values;        // one per run
    std::vector<double> delta_pct;     // vs the first run; delta_pct[0] == 0
};

struct Comparison
{
    std::vector<std::string> labels;
    std::vector<ComparisonRow> rows;

    ComparisonRow const& row(std::string_view metric) const;
};

/// Reads summary.json and manifest.json from each run directory. Throws
/// IngestError when a file is missing and ConfigError when the runs used
/// different populations.
Comparison compare_scenarios(std::vector<std::filesystem::path> const& run_dirs);
std::string comparison_to_csv(Comparison const& c);
std::string comparison_to_text(Comparison const& c);

struct BuildingExposure
{
    BuildingId id = 0;
    BuildingKind kind = BuildingKind::single_family;
    Insulation insulation = Insulation::average;
    bool residential = true;
    double mean_t_in = 0.0;
    double min_t_in = 0.0;
    double mean_rr = 0.0;
};

struct InsulationGroupStats
{
    std::string scope;  // "residential" or "all"
    Insulation insulation = Insulation::average;
    std::size_t n = 0;
    double mean_t_in = 0.0;
    double q1_t_in = 0.0;
    double median_t_in = 0.0;
    double q3_t_in = 0.0;
    double min_t_in = 0.0;
    double mean_rr = 0.0;
};

struct ExposureReport
{
    std::vector<BuildingExposure> buildings;
    std::vector<InsulationGroupStats> groups;
};

/// Per-building and per-insulation-class statistics from a run's exposure.csv;
/// writes exposure_summary.csv and insulation_summary.csv into the run directory.
ExposureReport export_exposure(std::filesystem::path const& run_dir);

/// Per-insulation-class statistics computed directly from traces.
std::vector<InsulationGroupStats> insulation_groups(std::vector<BuildingExposure> const& buildings);
std::vector<BuildingExposure> building_exposure(Population const& pop, std::vector<ExposureTrace> const& traces,
                                                RRModel const& rr);

}  // namespace outval
