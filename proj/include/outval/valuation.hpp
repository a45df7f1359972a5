#pragma once

// Cost models and the Monte-Carlo loop turning exposure into USD.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "outval/hazard.hpp"
#include "outval/outage.hpp"
#include "outval/population.hpp"
#include "outval/thermal.hpp"
#include "outval/weather.hpp"

namespace outval
{

struct CostRange
{
    double min = 0.0;
    double max = 0.0;

    /// min + (max - min) * clamp(ratio, 0, 1)
    double at(double ratio) const;
};

struct CICSectorCoeffs
{
    double base = 0.0;      // USD per event
    double per_hour = 0.0;  // USD/h, first 16 h
    double per_kwh = 0.0;   // USD per kWh of average demand not served
    double slope = 0.0;     // USD/h beyond 16 h
};

/// Interruption-cost tables. The shipped numbers are order-of-magnitude
/// placeholders, not a calibrated customer-damage survey.
struct CICParams
{
    std::map<Sector, CICSectorCoeffs> sectors{
        {Sector::residential, {2.0, 1.0, 0.5, 0.5}},
        {Sector::small_ci, {300.0, 250.0, 5.0, 100.0}},
        {Sector::medium_ci, {2000.0, 1500.0, 3.0, 500.0}},
        {Sector::large_ci, {2000.0, 1500.0, 3.0, 500.0}},
    };
    double season_multiplier = 1.0;
    std::map<BuildingKind, double> industry_multiplier;  // C&I; missing kinds use 1
    std::map<IncomeBracket, double> income_multiplier{
        {IncomeBracket::low, 0.8}, {IncomeBracket::median, 1.0}, {IncomeBracket::high, 1.2}};
    double backup_discount = 0.5;  // multiplier for C&I customers with backup generation
    double cap_hours = 16.0;
};

struct WorkingHours
{
    int start_hour = 8;  // local time, inclusive
    int end_hour = 16;   // exclusive

    bool contains(int hour) const { return hour >= start_hour && hour < end_hour; }
};

struct ValuationParams
{
    double vsl = 11.6e6;
    std::array<CostRange, kConditionCount> medical_insured{{{1014, 6282}, {1014, 6282}, {1014, 6282}}};
    std::array<CostRange, kConditionCount> medical_uninsured{{{3162, 15348}, {3162, 15348}, {3162, 15348}}};
    double severity_ceiling = 0.5;        // P_mort at which medical cost reaches the range maximum
    double home_recovery_fraction = 0.25;  // of the insured minimum, for occupants recovered at home
    CostRange pipe_insured{500, 2000};
    CostRange pipe_uninsured{600, 5000};
    std::map<BuildingKind, double> wages{
        {BuildingKind::single_family, 45.51}, {BuildingKind::multi_family, 45.51},
        {BuildingKind::mobile_home, 45.51},   {BuildingKind::office, 37.88},
        {BuildingKind::warehouse_storage, 15.49}, {BuildingKind::big_box, 29.36},
        {BuildingKind::strip_mall, 22.38},    {BuildingKind::education, 27.95},
        {BuildingKind::food_service, 13.4},   {BuildingKind::food_sales, 15.64},
        {BuildingKind::lodging, 13.44},       {BuildingKind::healthcare, 43.15},
        {BuildingKind::low_occupancy, 21.41},
    };
    WorkingHours residential_hours{8, 16};
    WorkingHours commercial_hours{8, 17};
    int utc_offset_hours = 0;
    CICParams cic;

    /// Throws ConfigError on inverted ranges, non-positive vsl or ceiling, or missing wages.
    void validate() const;
};

struct CostBreakdown
{
    double c_vsl = 0.0;
    double c_medical = 0.0;
    double c_prod = 0.0;
    double c_build = 0.0;
    double c_cic = 0.0;
    std::int64_t n_death = 0;
    std::int64_t n_injured = 0;
    std::int64_t n_at_risk = 0;

    double nei() const { return c_vsl + c_medical + c_prod + c_build; }
    double total() const { return nei() + c_cic; }

    friend bool operator==(CostBreakdown const&, CostBreakdown const&) = default;
};

double vsl_cost(std::vector<std::int64_t> const& deaths_per_building, double vsl);

/// Medical cost of one occupant; zero unless the occupant was injured and recovered.
double medical_cost_for(OccupantOutcome const& o, double p_mort, ValuationParams const& params);
double medical_cost(std::vector<OccupantOutcome> const& outcomes, std::vector<double> const& p_mort_per_outcome,
                    ValuationParams const& params);

/// Productivity loss of one building over the working hours of its trace.
double productivity_cost_for(Building const& b, ExposureTrace const& trace, ProductivityModel const& model,
                             ValuationParams const& params);
double productivity_cost(Population const& pop, std::vector<ExposureTrace> const& traces,
                         ProductivityModel const& model, ValuationParams const& params);

/// Draws damage and insurance for one building; zero when undamaged.
double repair_cost_for(double sum_wi, double beta_wi, HazardConfig const& hazard, ValuationParams const& params,
                       RandomStream& rng);
/// Repair cost given the damage and insurance outcomes.
double repair_cost_given(double sum_wi, double beta_wi, bool insured, ValuationParams const& params);

/// Interruption cost for a given total unpowered duration.
double interruption_cost(Building const& b, double unpowered_hours, CICParams const& params);
double interruption_cost(Building const& b, std::vector<bool> const& schedule, long long dt,
                         CICParams const& params);

/// Everything a trial needs, with the deterministic per-building quantities
/// precomputed once per scenario.
struct ScenarioBundle
{
    Population pop;
    PowerScheduleSet schedules;
    std::vector<ExposureTrace> traces;  // aligned with pop.buildings
    std::vector<double> rh;             // humidity per step of the window
    HazardConfig hazard;
    ValuationParams valuation;
    double beta_wi = 1.0;

    std::vector<double> mean_rr;
    std::vector<double> p_mort;
    std::vector<double> sum_wi;
    std::vector<double> prod_cost;
    std::vector<double> cic_cost;
};

/// Simulates every building over `weather` under `schedules` and fills the
/// derived per-building vectors. Buildings simulate in parallel.
ScenarioBundle prepare_bundle(Population pop, WeatherSeries const& weather, PowerScheduleSet schedules,
                              HazardConfig hazard, ValuationParams valuation, double beta_wi,
                              ThermalParams const& thermal = {}, unsigned threads = 1);

/// Simulates every building and returns the traces, in population order.
std::vector<ExposureTrace> simulate_population(Population const& pop, WeatherSeries const& weather,
                                               PowerScheduleSet const& schedules, ThermalParams const& thermal,
                                               unsigned threads);

/// Pure function of (bundle, trial_index, master_seed).
CostBreakdown run_trial(ScenarioBundle const& bundle, std::uint32_t trial_index, std::uint64_t master_seed);

/// Trial results in trial order; identical for any thread count.
std::vector<CostBreakdown> run_monte_carlo(ScenarioBundle const& bundle, std::uint32_t n_trials,
                                           std::uint64_t master_seed, unsigned threads);

struct ComponentStats
{
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation (0 for one trial)
    double p5 = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Nearest-rank statistics. Throws std::invalid_argument on empty input.
ComponentStats component_stats(std::vector<double> values);

struct HistogramBin
{
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
};

/// Fixed-width bins over [min, max]; the last bin is closed.
std::vector<HistogramBin> histogram(std::vector<double> const& values, std::size_t bins = 50);

inline constexpr std::array<std::string_view, 9> kSummaryComponents{
    "c_vsl", "c_medical", "c_prod", "c_build", "c_cic", "nei", "total", "n_death", "n_injured"};

struct Summary
{
    std::size_t n_trials = 0;
    std::map<std::string, ComponentStats, std::less<>> components;
    std::vector<HistogramBin> total_histogram;
};

/// Throws std::invalid_argument when `trials` is empty.
Summary summarize(std::vector<CostBreakdown> const& trials, std::size_t bins = 50);

/// Value of a named component (one of kSummaryComponents) for one trial.
double component_value(CostBreakdown const& c, std::string_view name);

std::string trials_to_csv(std::vector<CostBreakdown> const& trials);
std::string histogram_to_csv(std::vector<HistogramBin> const& bins);

}  // namespace outval
