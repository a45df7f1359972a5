#include "outval/population.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <span>

#include <fmt/format.h>

#include "outval/csv.hpp"
#include "outval/error.hpp"
#include "outval/rng.hpp"

namespace outval
{

namespace
{
constexpr std::array<std::string_view, kBuildingKindCount> kKindNames{
    "single_family", "multi_family", "mobile_home", "office",    "warehouse_storage",
    "big_box",       "strip_mall",   "education",   "food_service", "food_sales",
    "lodging",       "healthcare",   "low_occupancy"};
constexpr std::array<std::string_view, kSectorCount> kSectorNames{"residential", "small_ci", "medium_ci",
                                                                  "large_ci"};
constexpr std::array<std::string_view, kInsulationCount> kInsulationNames{
    "little", "poor", "below_average", "average", "above_average", "good", "very_good"};
constexpr std::array<std::string_view, 2> kFuelNames{"electric", "gas_with_electric_blower"};
constexpr std::array<std::string_view, 3> kIncomeNames{"low", "median", "high"};

template <typename E, std::size_t N>
std::optional<E> lookup(std::array<std::string_view, N> const& names, std::string_view s)
{
    for (std::size_t i = 0; i < N; ++i)
    {
        if (names[i] == s)
        {
            return static_cast<E>(i);
        }
    }
    return std::nullopt;
}

constexpr std::array<std::string_view, 17> kColumns{
    "id",           "class",       "sector",   "insulation",         "heating_fuel", "floor_area",
    "ua",           "thermal_mass", "hvac_heat_capacity", "setpoint", "deadband",    "n_occupants",
    "n_workers",    "job_requires_power", "avg_annual_kwh", "annual_income_bracket", "backup"};

std::size_t draw_categorical(std::span<double const> weights, RandomStream& rng)
{
    double const u = rng.uniform();
    double cum = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i)
    {
        if (weights[i] > 0.0)
        {
            last_positive = i;
        }
        cum += weights[i];
        if (u < cum)
        {
            return i;
        }
    }
    return last_positive;
}

void check_weights(std::span<double const> w, std::string_view what)
{
    double sum = 0.0;
    for (double x : w)
    {
        if (!(x >= 0.0) || !std::isfinite(x))
        {
            throw ConfigError(fmt::format("population: {} contains a negative or non-finite weight", what));
        }
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9)
    {
        throw ConfigError(fmt::format("population: {} sum to {:.12g}, expected 1", what, sum));
    }
}
}  // namespace

std::string_view to_string(BuildingKind k) { return kKindNames[static_cast<std::size_t>(k)]; }
std::string_view to_string(Sector s) { return kSectorNames[static_cast<std::size_t>(s)]; }
std::string_view to_string(Insulation i) { return kInsulationNames[static_cast<std::size_t>(i)]; }
std::string_view to_string(HeatingFuel f) { return kFuelNames[static_cast<std::size_t>(f)]; }
std::string_view to_string(IncomeBracket b) { return kIncomeNames[static_cast<std::size_t>(b)]; }

std::optional<BuildingKind> building_kind_from_string(std::string_view s)
{
    return lookup<BuildingKind>(kKindNames, s);
}
std::optional<Sector> sector_from_string(std::string_view s) { return lookup<Sector>(kSectorNames, s); }
std::optional<Insulation> insulation_from_string(std::string_view s)
{
    return lookup<Insulation>(kInsulationNames, s);
}
std::optional<HeatingFuel> heating_fuel_from_string(std::string_view s)
{
    return lookup<HeatingFuel>(kFuelNames, s);
}
std::optional<IncomeBracket> income_bracket_from_string(std::string_view s)
{
    return lookup<IncomeBracket>(kIncomeNames, s);
}

std::vector<std::string_view> population_csv_columns() { return {kColumns.begin(), kColumns.end()}; }

void PopulationSpec::fill_kind_defaults()
{
    struct KindDefaults
    {
        BuildingKind kind;
        UniformRange area;
        double workers_per_100m2;
        Sector sector;
    };
    static constexpr std::array<KindDefaults, kBuildingKindCount> kDefaults{{
        {BuildingKind::single_family, {120, 220}, 0.0, Sector::residential},
        {BuildingKind::multi_family, {60, 110}, 0.0, Sector::residential},
        {BuildingKind::mobile_home, {50, 90}, 0.0, Sector::residential},
        {BuildingKind::office, {1400, 2600}, 4.0, Sector::medium_ci},
        {BuildingKind::warehouse_storage, {2000, 4000}, 0.5, Sector::small_ci},
        {BuildingKind::big_box, {6000, 10000}, 0.8, Sector::large_ci},
        {BuildingKind::strip_mall, {1400, 2600}, 1.5, Sector::small_ci},
        {BuildingKind::education, {3500, 6500}, 3.0, Sector::medium_ci},
        {BuildingKind::food_service, {350, 650}, 5.0, Sector::small_ci},
        {BuildingKind::food_sales, {1000, 2000}, 2.0, Sector::small_ci},
        {BuildingKind::lodging, {2800, 5200}, 1.0, Sector::medium_ci},
        {BuildingKind::healthcare, {4000, 8000}, 3.0, Sector::large_ci},
        {BuildingKind::low_occupancy, {700, 1300}, 0.3, Sector::small_ci},
    }};
    for (auto const& d : kDefaults)
    {
        floor_area.try_emplace(d.kind, d.area);
        if (!is_residential(d.kind))
        {
            workers_per_100m2.try_emplace(d.kind, d.workers_per_100m2);
            ci_sector.try_emplace(d.kind, d.sector);
        }
    }
}

PopulationSpec PopulationSpec::demo()
{
    PopulationSpec spec;
    spec.counts = {
        {BuildingKind::single_family, 900}, {BuildingKind::multi_family, 300},
        {BuildingKind::mobile_home, 108},   {BuildingKind::office, 10},
        {BuildingKind::warehouse_storage, 10}, {BuildingKind::big_box, 10},
        {BuildingKind::strip_mall, 10},     {BuildingKind::education, 10},
        {BuildingKind::food_service, 9},    {BuildingKind::food_sales, 9},
        {BuildingKind::lodging, 9},         {BuildingKind::healthcare, 9},
        {BuildingKind::low_occupancy, 9},
    };
    spec.fill_kind_defaults();
    return spec;
}

Population synthesize_population(PopulationSpec const& spec_in, std::uint64_t seed)
{
    PopulationSpec spec = spec_in;
    spec.fill_kind_defaults();
    check_weights(spec.insulation_weights, "insulation weights");
    check_weights(spec.occupant_weights, "occupant weights");

    long long n_total = 0;
    for (auto const& [kind, n] : spec.counts)
    {
        if (n < 0)
        {
            throw ConfigError(fmt::format("population: negative count for '{}'", to_string(kind)));
        }
        n_total += n;
    }
    if (n_total == 0)
    {
        throw ConfigError("population: zero buildings");
    }
    for (auto const& row : spec.insulation_table)
    {
        if (!(row.ua_per_m2 > 0.0) || !(row.c_per_m2 > 0.0))
        {
            throw ConfigError("population: insulation table entries must be positive");
        }
    }
    if (!(spec.deadband > 0.0))
    {
        throw ConfigError("population: deadband must be positive");
    }
    for (auto const& [kind, sector] : spec.ci_sector)
    {
        if (sector == Sector::residential)
        {
            throw ConfigError(fmt::format("population: C&I kind '{}' mapped to residential", to_string(kind)));
        }
    }

    Population pop;
    pop.seed_used = seed;
    pop.buildings.reserve(static_cast<std::size_t>(n_total));
    std::uint32_t index = 0;
    for (auto const& [kind, count] : spec.counts)
    {
        bool const res = is_residential(kind);
        UniformRange const area_range = spec.floor_area.at(kind);
        for (int j = 0; j < count; ++j, ++index)
        {
            RandomStream rng(seed, {StreamDomain::population, 0, index, 0});
            Building b;
            b.id = static_cast<BuildingId>(index) + 1;
            b.cls = {kind, res ? Sector::residential : spec.ci_sector.at(kind)};
            b.insulation = static_cast<Insulation>(draw_categorical(spec.insulation_weights, rng));
            b.floor_area = rng.uniform(area_range.lo, area_range.hi);
            auto const& env = spec.insulation_table[static_cast<std::size_t>(b.insulation)];
            b.ua = env.ua_per_m2 * b.floor_area;
            b.thermal_mass = env.c_per_m2 * b.floor_area;
            b.setpoint = spec.setpoint;
            b.deadband = spec.deadband;
            b.hvac_heat_capacity = b.ua * (b.setpoint - spec.hvac_design_outdoor_c) * spec.hvac_oversizing;
            b.heating_fuel = rng.bernoulli(spec.electric_heat_prob) ? HeatingFuel::electric
                                                                    : HeatingFuel::gas_with_electric_blower;
            if (res)
            {
                b.n_occupants = static_cast<int>(draw_categorical(spec.occupant_weights, rng)) + 1;
                for (int k = 0; k < b.n_occupants; ++k)
                {
                    b.n_workers += rng.bernoulli(spec.residential_worker_prob) ? 1 : 0;
                }
                b.job_requires_power = rng.bernoulli(spec.residential_job_power_prob);
                b.avg_annual_kwh = b.floor_area * spec.residential_kwh_per_m2
                                   * rng.uniform(spec.kwh_spread.lo, spec.kwh_spread.hi);
                b.income_bracket = spec.income_bracket;
            }
            else
            {
                double const expected = b.floor_area / 100.0 * spec.workers_per_100m2.at(kind);
                b.n_workers = std::max(1, static_cast<int>(std::lround(expected * rng.uniform(0.8, 1.2))));
                b.n_occupants = b.n_workers;
                b.job_requires_power = rng.bernoulli(spec.commercial_job_power_prob);
                b.avg_annual_kwh = b.floor_area * spec.commercial_kwh_per_m2
                                   * rng.uniform(spec.kwh_spread.lo, spec.kwh_spread.hi);
                b.backup = rng.bernoulli(spec.backup_prob);
            }
            pop.total_occupants += b.n_occupants;
            pop.buildings.push_back(b);
        }
    }
    return pop;
}

std::vector<PopulationViolation> validate_population(Population const& pop)
{
    std::vector<PopulationViolation> out;
    auto add = [&](BuildingId id, std::string_view field, std::string msg) {
        out.push_back({id, std::string(field), std::move(msg)});
    };
    std::set<BuildingId> seen;
    std::int64_t occupants = 0;
    for (auto const& b : pop.buildings)
    {
        if (!seen.insert(b.id).second)
        {
            add(b.id, "id", "duplicate building id");
        }
        if (is_residential(b.cls.kind) != (b.cls.sector == Sector::residential))
        {
            add(b.id, "sector", fmt::format("kind '{}' cannot map to sector '{}'", to_string(b.cls.kind),
                                            to_string(b.cls.sector)));
        }
        if (!(b.ua > 0.0))
        {
            add(b.id, "ua", fmt::format("ua must be > 0 (got {})", b.ua));
        }
        if (!(b.thermal_mass > 0.0))
        {
            add(b.id, "thermal_mass", fmt::format("thermal_mass must be > 0 (got {})", b.thermal_mass));
        }
        if (!(b.floor_area > 0.0))
        {
            add(b.id, "floor_area", fmt::format("floor_area must be > 0 (got {})", b.floor_area));
        }
        if (!(b.hvac_heat_capacity >= 0.0))
        {
            add(b.id, "hvac_heat_capacity", "hvac_heat_capacity must be >= 0");
        }
        if (!(b.deadband > 0.0))
        {
            add(b.id, "deadband", fmt::format("deadband must be > 0 (got {})", b.deadband));
        }
        if (!std::isfinite(b.setpoint))
        {
            add(b.id, "setpoint", "setpoint must be finite");
        }
        if (b.n_occupants < 0)
        {
            add(b.id, "n_occupants", "n_occupants must be >= 0");
        }
        if (b.n_workers < 0)
        {
            add(b.id, "n_workers", "n_workers must be >= 0");
        }
        if (!(b.avg_annual_kwh > 0.0))
        {
            add(b.id, "avg_annual_kwh", fmt::format("avg_annual_kwh must be > 0 (got {})", b.avg_annual_kwh));
        }
        occupants += b.n_occupants;
    }
    if (occupants != pop.total_occupants)
    {
        add(-1, "total_occupants",
            fmt::format("total_occupants {} differs from per-building sum {}", pop.total_occupants, occupants));
    }
    return out;
}

std::string population_to_csv(Population const& pop)
{
    std::string out = fmt::format("{}\n", fmt::join(kColumns, ","));
    for (auto const& b : pop.buildings)
    {
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", b.id, to_string(b.cls.kind),
                           to_string(b.cls.sector), to_string(b.insulation), to_string(b.heating_fuel),
                           b.floor_area, b.ua, b.thermal_mass, b.hvac_heat_capacity, b.setpoint, b.deadband,
                           b.n_occupants, b.n_workers, b.job_requires_power ? 1 : 0, b.avg_annual_kwh,
                           to_string(b.income_bracket), b.backup ? 1 : 0);
    }
    return out;
}

void save_population(Population const& pop, std::filesystem::path const& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    }
    out << population_to_csv(pop);
}

Population parse_population_csv(std::string_view text, std::string const& source_name)
{
    auto const table = CsvTable::parse(text, source_name);
    std::array<std::size_t, kColumns.size()> col{};
    for (std::size_t i = 0; i < kColumns.size(); ++i)
    {
        col[i] = table.require_column(kColumns[i]);
    }
    if (table.rows().empty())
    {
        throw IngestError(fmt::format("{}: zero buildings", source_name));
    }

    auto enum_field = [&](auto parser, CsvTable::Row const& row, std::size_t c) {
        auto const& text = row.fields[col[c]];
        auto v = parser(text);
        if (!v)
        {
            throw IngestError(fmt::format("{}: row {} column '{}': unknown value '{}'", source_name, row.line,
                                          kColumns[c], text));
        }
        return *v;
    };

    Population pop;
    std::set<BuildingId> seen;
    for (auto const& row : table.rows())
    {
        auto num = [&](std::size_t c) {
            return parse_double_field(row.fields[col[c]], source_name, row.line, kColumns[c]);
        };
        auto integer = [&](std::size_t c) {
            return parse_int_field(row.fields[col[c]], source_name, row.line, kColumns[c]);
        };
        auto flag = [&](std::size_t c) {
            return parse_bool_field(row.fields[col[c]], source_name, row.line, kColumns[c]);
        };
        Building b;
        b.id = integer(0);
        if (!seen.insert(b.id).second)
        {
            throw IngestError(
                fmt::format("{}: row {} column 'id': duplicate building id {}", source_name, row.line, b.id));
        }
        b.cls.kind = enum_field(building_kind_from_string, row, 1);
        b.cls.sector = enum_field(sector_from_string, row, 2);
        b.insulation = enum_field(insulation_from_string, row, 3);
        b.heating_fuel = enum_field(heating_fuel_from_string, row, 4);
        b.floor_area = num(5);
        b.ua = num(6);
        b.thermal_mass = num(7);
        b.hvac_heat_capacity = num(8);
        b.setpoint = num(9);
        b.deadband = num(10);
        b.n_occupants = static_cast<int>(integer(11));
        b.n_workers = static_cast<int>(integer(12));
        b.job_requires_power = flag(13);
        b.avg_annual_kwh = num(14);
        b.income_bracket = enum_field(income_bracket_from_string, row, 15);
        b.backup = flag(16);
        pop.total_occupants += b.n_occupants;
        pop.buildings.push_back(b);
    }
    return pop;
}

Population load_population(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw IngestError(fmt::format("cannot open '{}'", path.string()));
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_population_csv(text, path.string());
}

}  // namespace outval
