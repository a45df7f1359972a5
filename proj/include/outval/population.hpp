#pragma once

// Customer premises and the occupants/workers exposed in them.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace outval
{

using BuildingId = std::int64_t;

enum class BuildingKind
{
    single_family,
    multi_family,
    mobile_home,
    office,
    warehouse_storage,
    big_box,
    strip_mall,
    education,
    food_service,
    food_sales,
    lodging,
    healthcare,
    low_occupancy,
};
inline constexpr std::size_t kBuildingKindCount = 13;

enum class Sector
{
    residential,
    small_ci,
    medium_ci,
    large_ci,
};
inline constexpr std::size_t kSectorCount = 4;

enum class Insulation
{
    little,
    poor,
    below_average,
    average,
    above_average,
    good,
    very_good,
};
inline constexpr std::size_t kInsulationCount = 7;

enum class HeatingFuel
{
    electric,
    gas_with_electric_blower,
};

enum class IncomeBracket
{
    low,
    median,
    high,
};

std::string_view to_string(BuildingKind k);
std::string_view to_string(Sector s);
std::string_view to_string(Insulation i);
std::string_view to_string(HeatingFuel f);
std::string_view to_string(IncomeBracket b);

std::optional<BuildingKind> building_kind_from_string(std::string_view s);
std::optional<Sector> sector_from_string(std::string_view s);
std::optional<Insulation> insulation_from_string(std::string_view s);
std::optional<HeatingFuel> heating_fuel_from_string(std::string_view s);
std::optional<IncomeBracket> income_bracket_from_string(std::string_view s);

constexpr bool is_residential(BuildingKind k)
{
    return k == BuildingKind::single_family || k == BuildingKind::multi_family
           || k == BuildingKind::mobile_home;
}

struct BuildingClass
{
    BuildingKind kind = BuildingKind::single_family;
    Sector sector = Sector::residential;

    friend bool operator==(BuildingClass const&, BuildingClass const&) = default;
};

struct Building
{
    BuildingId id = 0;
    BuildingClass cls;
    Insulation insulation = Insulation::average;
    HeatingFuel heating_fuel = HeatingFuel::electric;
    double floor_area = 0.0;          // m2
    double ua = 0.0;                  // W/degC
    double thermal_mass = 0.0;        // J/degC
    double hvac_heat_capacity = 0.0;  // W of delivered heat
    double setpoint = 21.0;           // degC
    double deadband = 1.0;            // degC
    int n_occupants = 0;
    int n_workers = 0;
    bool job_requires_power = false;
    double avg_annual_kwh = 0.0;
    IncomeBracket income_bracket = IncomeBracket::median;
    bool backup = false;  // backup generation; only meaningful for C&I

    bool residential() const { return cls.sector == Sector::residential; }

    friend bool operator==(Building const&, Building const&) = default;
};

struct Population
{
    std::vector<Building> buildings;
    std::int64_t total_occupants = 0;
    std::uint64_t seed_used = 0;  // provenance only; not part of equality

    friend bool operator==(Population const& a, Population const& b)
    {
        return a.buildings == b.buildings && a.total_occupants == b.total_occupants;
    }
};

/// Envelope parameters per unit floor area for one insulation class.
struct InsulationThermal
{
    double ua_per_m2 = 0.0;  // W/(degC m2)
    double c_per_m2 = 0.0;   // J/(degC m2)
};

struct UniformRange
{
    double lo = 0.0;
    double hi = 0.0;
};

/// Everything synthesize_population needs; defaults describe the shipped demo mix.
struct PopulationSpec
{
    std::map<BuildingKind, int> counts;
    std::array<double, kInsulationCount> insulation_weights{0.10, 0.15, 0.20, 0.25, 0.15, 0.10, 0.05};
    std::array<InsulationThermal, kInsulationCount> insulation_table{{
        {3.2, 250e3},
        {2.7, 250e3},
        {2.3, 250e3},
        {1.9, 250e3},
        {1.6, 250e3},
        {1.3, 250e3},
        {1.0, 250e3},
    }};
    // Residential occupants per household: value i+1 drawn with weight [i].
    std::vector<double> occupant_weights{0.27, 0.33, 0.16, 0.14, 0.06, 0.04};
    double residential_worker_prob = 0.3;  // per occupant, working from home
    double residential_job_power_prob = 0.7;
    double commercial_job_power_prob = 0.8;
    double electric_heat_prob = 0.6;
    double backup_prob = 0.1;  // C&I only
    double setpoint = 21.0;
    double deadband = 1.0;
    // Heating capacity = ua * (setpoint - design_outdoor) * oversizing.
    double hvac_design_outdoor_c = -19.0;
    double hvac_oversizing = 1.5;
    double residential_kwh_per_m2 = 90.0;
    double commercial_kwh_per_m2 = 250.0;
    UniformRange kwh_spread{0.75, 1.25};
    std::map<BuildingKind, UniformRange> floor_area;     // m2
    std::map<BuildingKind, double> workers_per_100m2;    // C&I only
    std::map<BuildingKind, Sector> ci_sector;            // C&I kind -> size class
    IncomeBracket income_bracket = IncomeBracket::median;

    /// Demo feeder mix: 1308 residential and 95 C&I buildings.
    static PopulationSpec demo();
    /// Fills the per-kind tables (floor area, workers, sector map) with defaults
    /// for any kind that has no entry.
    void fill_kind_defaults();
};

struct PopulationViolation
{
    BuildingId building_id = 0;
    std::string field;
    std::string message;
};

/// Deterministic for fixed (spec, seed). Throws ConfigError on a bad spec.
Population synthesize_population(PopulationSpec const& spec, std::uint64_t seed);

/// Empty iff every Building and Population invariant holds.
std::vector<PopulationViolation> validate_population(Population const& pop);

void save_population(Population const& pop, std::filesystem::path const& path);
std::string population_to_csv(Population const& pop);
/// Throws IngestError naming row/column on malformed input.
Population load_population(std::filesystem::path const& path);
Population parse_population_csv(std::string_view text, std::string const& source_name);

/// Column names of the population CSV, in file order.
std::vector<std::string_view> population_csv_columns();

}  // namespace outval
