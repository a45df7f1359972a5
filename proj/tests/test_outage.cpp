#include <doctest.h>

#include "outval/error.hpp"
#include "outval/outage.hpp"

using namespace outval;

namespace
{
TimeWindow window_hours(int h)
{
    auto const s = *parse_iso8601("2021-02-15T06:00:00Z");
    return {s, s + std::chrono::hours(h)};
}

Population demo_pop() { return synthesize_population(PopulationSpec::demo(), 17); }

AvailabilitySeries constant_availability(double a, std::size_t slots)
{
    return {std::vector<double>(slots, a), 1.0};
}

bool all_of(std::vector<bool> const& v, bool value)
{
    return std::all_of(v.begin(), v.end(), [&](bool x) { return x == value; });
}
}  // namespace

TEST_CASE("base schedule")
{
    auto const pop = demo_pop();
    auto const s = build_base_schedule(pop, window_hours(96), 300);
    CHECK(s.schedules.size() == 1403);
    CHECK(s.isolated_ids.empty());
    for (auto const& [id, sched] : s.schedules)
    {
        CHECK(sched.size() == 1152);
        CHECK(all_of(sched, true));
    }
    CHECK_THROWS_AS(build_base_schedule(pop, window_hours(0), 300), RangeError);
}

TEST_CASE("select_isolated")
{
    auto const pop = demo_pop();
    CHECK(select_isolated(pop, 0.0, 1).empty());
    auto const a = select_isolated(pop, 0.034, 1);
    auto const b = select_isolated(pop, 0.034, 2);
    CHECK(a.size() == 48);
    CHECK(b.size() == 48);
    CHECK(a != b);
    CHECK(a == select_isolated(pop, 0.034, 1));
    CHECK_THROWS_AS(select_isolated(pop, 1.0, 1), ConfigError);
}

TEST_CASE("controlled outage")
{
    auto const pop = demo_pop();
    auto const w = window_hours(24);
    auto const base = build_base_schedule(pop, w, 300);
    CHECK(build_controlled_outage(pop, w, 300, {}, 0.0, 1).schedules == base.schedules);

    std::set<BuildingId> residential;
    for (auto const& b : pop.buildings)
    {
        if (b.residential())
        {
            residential.insert(b.id);
        }
    }
    auto const co = build_controlled_outage(pop, w, 300, residential, 0.0, 1);
    for (auto const& b : pop.buildings)
    {
        CHECK(all_of(co.at(b.id), !b.residential()));
    }

    auto const faulted = build_controlled_outage(pop, w, 300, {}, 0.034, 9);
    CHECK(faulted.isolated_ids.size() == 48);
    for (auto id : faulted.isolated_ids)
    {
        CHECK(all_of(faulted.at(id), false));
    }
    CHECK_THROWS_AS(build_controlled_outage(pop, w, 300, {999999}, 0.0, 1), ConfigError);

    auto const shed = sample_shed_set(pop, 2.0 / 3.0, 4);
    CHECK(shed.size() == 872);
    for (auto id : shed)
    {
        CHECK(residential.contains(id));
    }
}

TEST_CASE("rolling groups are equal-count consumption tiers")
{
    auto const pop = demo_pop();
    auto const groups = rolling_groups(pop, 3);
    REQUIRE(groups.size() == 3);
    std::map<BuildingId, double> kwh;
    for (auto const& b : pop.buildings)
    {
        kwh[b.id] = b.avg_annual_kwh;
    }
    for (auto const& g : groups)
    {
        CHECK(g.size() == 436);
    }
    for (std::size_t k = 0; k + 1 < groups.size(); ++k)
    {
        double lowest = 1e300;
        for (auto id : groups[k])
        {
            lowest = std::min(lowest, kwh[id]);
        }
        for (auto id : groups[k + 1])
        {
            CHECK(kwh[id] <= lowest);
        }
    }
    CHECK_THROWS_AS(rolling_groups(pop, 1), ConfigError);
}

TEST_CASE("rolling outage with k = 1 of 3 groups")
{
    auto const pop = demo_pop();
    auto const w = window_hours(96);
    auto const avail = constant_availability(0.34, 96);
    CHECK(powered_group_count(0.34, 3) == 1);
    CHECK(powered_group_count(2.0 / 3.0, 3) == 2);

    auto const hi = build_rolling_outage(pop, w, 300, 3, avail, true, 0.034, 5);
    auto const di = build_rolling_outage(pop, w, 300, 3, avail, false, 0.034, 5);
    CHECK(hi.isolated_ids.empty());
    CHECK(di.isolated_ids.size() == 48);

    auto const groups = rolling_groups(pop, 3);
    std::vector<double> group_off;
    for (auto const& g : groups)
    {
        group_off.push_back(unpowered_hours(hi.at(g.front()), 300));
    }
    CHECK(*std::max_element(group_off.begin(), group_off.end())
              - *std::min_element(group_off.begin(), group_off.end())
          <= 1.0);

    for (auto const& b : pop.buildings)
    {
        auto const& s = hi.at(b.id);
        if (b.residential())
        {
            CHECK(max_contiguous_off(s, 300) == 2.0);
        }
        else
        {
            CHECK(all_of(s, true));
        }
        // Hardened dominates damaged pointwise.
        auto const& d = di.at(b.id);
        for (std::size_t i = 0; i < s.size(); ++i)
        {
            CHECK((s[i] || !d[i]));
        }
        if (di.isolated_ids.contains(b.id))
        {
            CHECK(all_of(d, false));
        }
        else
        {
            CHECK(d == s);
        }
    }

    // exactly k groups powered per slot
    for (std::size_t slot = 0; slot < 96; ++slot)
    {
        int powered = 0;
        for (auto const& g : groups)
        {
            powered += hi.at(g.front())[slot * 12] ? 1 : 0;
        }
        CHECK(powered == 1);
    }

    CHECK(build_rolling_outage(pop, w, 300, 3, avail, true, 0.034, 5).schedules == hi.schedules);
    CHECK(build_rolling_outage(pop, w, 300, 3, constant_availability(1.0, 96), true, 0.0, 5).schedules
          == build_base_schedule(pop, w, 300).schedules);
    CHECK_THROWS_AS(build_rolling_outage(pop, w, 300, 3, constant_availability(0.34, 95), true, 0.0, 5),
                    ConfigError);
}

TEST_CASE("max_contiguous_off")
{
    CHECK(max_contiguous_off(std::vector<bool>(1152, true), 300) == 0.0);
    CHECK(max_contiguous_off(std::vector<bool>(1152, false), 300) == 96.0);
    std::vector<bool> alt(96 * 12);
    for (std::size_t i = 0; i < alt.size(); ++i)
    {
        alt[i] = (i / 12) % 2 == 0;
    }
    CHECK(max_contiguous_off(alt, 300) == 1.0);
}

TEST_CASE("schedule csv is run-length encoded")
{
    Population pop;
    Building b;
    b.id = 7;
    b.ua = 1;
    b.thermal_mass = 1;
    b.avg_annual_kwh = 1;
    pop.buildings = {b};
    auto s = build_base_schedule(pop, window_hours(3), 3600);
    s.schedules.at(7)[1] = false;
    CHECK(schedules_to_csv(s) == "building_id,slot_start,powered\n"
                                 "7,2021-02-15T06:00:00Z,1\n"
                                 "7,2021-02-15T07:00:00Z,0\n"
                                 "7,2021-02-15T08:00:00Z,1\n");
}
