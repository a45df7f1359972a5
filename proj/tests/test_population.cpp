#include <doctest.h>

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include <boost/math/distributions/chi_squared.hpp>

#include "outval/error.hpp"
#include "outval/population.hpp"

using namespace outval;

TEST_CASE("demo spec yields 1308 residential and 95 C&I buildings")
{
    auto const pop = synthesize_population(PopulationSpec::demo(), 11);
    CHECK(pop.buildings.size() == 1403);
    auto const res = std::count_if(pop.buildings.begin(), pop.buildings.end(),
                                   [](Building const& b) { return b.residential(); });
    CHECK(res == 1308);
    CHECK(validate_population(pop).empty());

    std::int64_t occupants = 0;
    std::set<Sector> sectors;
    for (auto const& b : pop.buildings)
    {
        occupants += b.n_occupants;
        sectors.insert(b.cls.sector);
        CHECK(is_residential(b.cls.kind) == b.residential());
        if (!b.residential())
        {
            CHECK(b.n_occupants == b.n_workers);
        }
    }
    CHECK(occupants == pop.total_occupants);
    CHECK(sectors.size() == kSectorCount);
}

TEST_CASE("synthesis is deterministic in (spec, seed)")
{
    auto const spec = PopulationSpec::demo();
    auto const a = synthesize_population(spec, 5);
    auto const b = synthesize_population(spec, 5);
    auto const c = synthesize_population(spec, 6);
    CHECK(a == b);
    CHECK(population_to_csv(a) == population_to_csv(b));
    CHECK_FALSE(a == c);
}

TEST_CASE("degenerate mixes")
{
    PopulationSpec spec;
    spec.counts = {{BuildingKind::single_family, 1}};
    spec.insulation_weights = {0, 0, 0, 0, 0, 1.0, 0};
    auto pop = synthesize_population(spec, 1);
    REQUIRE(pop.buildings.size() == 1);
    CHECK(pop.buildings[0].insulation == Insulation::good);

    spec.counts = {{BuildingKind::multi_family, 40}};
    spec.occupant_weights = {0, 1.0};
    pop = synthesize_population(spec, 1);
    CHECK(pop.total_occupants == 80);
}

TEST_CASE("bad specs are configuration errors")
{
    PopulationSpec spec = PopulationSpec::demo();
    spec.insulation_weights[0] += 1e-6;
    CHECK_THROWS_AS(synthesize_population(spec, 1), ConfigError);

    spec = PopulationSpec::demo();
    spec.occupant_weights = {0.5, 0.4};
    CHECK_THROWS_AS(synthesize_population(spec, 1), ConfigError);

    spec = PopulationSpec{};
    CHECK_THROWS_WITH_AS(synthesize_population(spec, 1), doctest::Contains("zero buildings"), ConfigError);
}

TEST_CASE("validate_population reports each violation with id and field")
{
    auto pop = synthesize_population(PopulationSpec::demo(), 3);
    CHECK(validate_population(pop).empty());

    pop.buildings[4].ua = 0.0;
    auto v = validate_population(pop);
    REQUIRE(v.size() == 1);
    CHECK(v[0].building_id == pop.buildings[4].id);
    CHECK(v[0].field == "ua");

    pop.buildings[4].ua = 100.0;
    pop.buildings[9].avg_annual_kwh = -5.0;
    v = validate_population(pop);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "avg_annual_kwh");

    pop.buildings[9].avg_annual_kwh = 5.0;
    pop.buildings[10].id = pop.buildings[11].id;
    v = validate_population(pop);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "id");
}

TEST_CASE("population csv round-trips and rejects malformed files")
{
    auto const pop = synthesize_population(PopulationSpec::demo(), 21);
    auto const text = population_to_csv(pop);
    CHECK(parse_population_csv(text, "p.csv") == pop);

    auto const tmp = std::filesystem::temp_directory_path() / "outval_pop_roundtrip.csv";
    save_population(pop, tmp);
    CHECK(load_population(tmp) == pop);
    std::filesystem::remove(tmp);

    auto const header = text.substr(0, text.find('\n') + 1);
    CHECK_THROWS_WITH_AS(parse_population_csv(header, "p.csv"), doctest::Contains("zero buildings"), IngestError);

    auto const first_row_end = text.find('\n', header.size());
    auto const row = text.substr(header.size(), first_row_end - header.size() + 1);
    auto const dup_msg = fmt::format("duplicate building id {}", pop.buildings[0].id);
    CHECK_THROWS_WITH_AS(parse_population_csv(header + row + row, "p.csv"), doctest::Contains(dup_msg.c_str()),
                         IngestError);

    std::string missing = text;
    missing.replace(0, 2, "ix");
    CHECK_THROWS_WITH_AS(parse_population_csv(missing, "p.csv"), doctest::Contains("'id'"), IngestError);

    std::string bad = header + row;
    bad.replace(bad.find("single_family"), 13, "castle_tower_");
    CHECK_THROWS_WITH_AS(parse_population_csv(bad, "p.csv"), doctest::Contains("row 2 column 'class'"),
                         IngestError);
}

TEST_CASE("insulation frequencies pass a chi-squared test at n = 1e5")
{
    PopulationSpec spec;
    spec.counts = {{BuildingKind::single_family, 100000}};
    auto const pop = synthesize_population(spec, 99);
    std::array<double, kInsulationCount> observed{};
    for (auto const& b : pop.buildings)
    {
        observed[static_cast<std::size_t>(b.insulation)] += 1.0;
    }
    double chi2 = 0.0;
    for (std::size_t k = 0; k < kInsulationCount; ++k)
    {
        double const expected = spec.insulation_weights[k] * 100000.0;
        chi2 += (observed[k] - expected) * (observed[k] - expected) / expected;
    }
    boost::math::chi_squared dist(kInsulationCount - 1);
    double const p = boost::math::cdf(boost::math::complement(dist, chi2));
    CHECK(p > 0.001);
}
