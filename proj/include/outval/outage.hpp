#pragma once

// Per-building power availability for the four outage scenarios.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "outval/population.hpp"
#include "outval/timeutil.hpp"

namespace outval
{

enum class Scenario
{
    base,
    co,     // controlled outage: shed circuits stay dark for the whole event
    ro_di,  // rolling outage, damaged infrastructure (isolated customers dark)
    ro_hi,  // rolling outage, hardened infrastructure
};

std::string_view to_string(Scenario s);
std::optional<Scenario> scenario_from_string(std::string_view s);

/// Half-open event window [start, end).
struct TimeWindow
{
    Timestamp start{};
    Timestamp end{};

    /// Number of dt steps; throws RangeError unless the span is a positive multiple of dt.
    std::size_t steps(long long dt) const;
};

struct PowerScheduleSet
{
    Scenario scenario = Scenario::base;
    TimeWindow window;
    long long dt = 0;
    std::map<BuildingId, std::vector<bool>> schedules;
    std::set<BuildingId> isolated_ids;

    std::vector<bool> const& at(BuildingId id) const;
};

/// Fraction of supply available per slot.
struct AvailabilitySeries
{
    std::vector<double> fractions;
    double slot_hours = 1.0;
};

PowerScheduleSet build_base_schedule(Population const& pop, TimeWindow window, long long dt);

/// round(fault_fraction * n) buildings drawn uniformly without replacement.
std::set<BuildingId> select_isolated(Population const& pop, double fault_fraction, std::uint64_t seed);

/// round(fraction * n_residential) residential buildings drawn uniformly
/// without replacement; used when a CO shed set is given as a target fraction.
std::set<BuildingId> sample_shed_set(Population const& pop, double fraction, std::uint64_t seed);

PowerScheduleSet build_controlled_outage(Population const& pop, TimeWindow window, long long dt,
                                         std::set<BuildingId> const& shed_set, double fault_fraction,
                                         std::uint64_t seed);

/// Residential buildings in equal-count consumption tiers, highest consumers in
/// group 0; ties go to the lower id first.
std::vector<std::vector<BuildingId>> rolling_groups(Population const& pop, int n_groups);

/// Number of groups powered in a slot with the given available fraction.
int powered_group_count(double availability, int n_groups);

PowerScheduleSet build_rolling_outage(Population const& pop, TimeWindow window, long long dt, int n_groups,
                                      AvailabilitySeries const& availability, bool hardened, double fault_fraction,
                                      std::uint64_t seed);

/// Longest run of unpowered steps, in hours.
double max_contiguous_off(std::vector<bool> const& schedule, long long dt);
/// Total unpowered time, in hours.
double unpowered_hours(std::vector<bool> const& schedule, long long dt);

/// Run-length CSV `building_id,slot_start,powered`: one row whenever a
/// building's state changes, plus one at the window start.
std::string schedules_to_csv(PowerScheduleSet const& set);

}  // namespace outval
