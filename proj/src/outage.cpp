#include "outval/outage.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "outval/error.hpp"
#include "outval/rng.hpp"

namespace outval
{

namespace
{
constexpr std::array<std::string_view, 4> kScenarioNames{"base", "co", "ro-di", "ro-hi"};

std::vector<BuildingId> sample_without_replacement(std::vector<BuildingId> ids, std::size_t k, RandomStream& rng)
{
    for (std::size_t i = 0; i < k; ++i)
    {
        std::size_t const j = i + static_cast<std::size_t>(rng.index(ids.size() - i));
        std::swap(ids[i], ids[j]);
    }
    ids.resize(k);
    return ids;
}

PowerScheduleSet all_powered(Population const& pop, TimeWindow window, long long dt, Scenario scenario)
{
    std::size_t const n = window.steps(dt);
    PowerScheduleSet set;
    set.scenario = scenario;
    set.window = window;
    set.dt = dt;
    for (auto const& b : pop.buildings)
    {
        set.schedules.emplace(b.id, std::vector<bool>(n, true));
    }
    return set;
}

void darken(PowerScheduleSet& set, std::set<BuildingId> const& ids)
{
    for (BuildingId id : ids)
    {
        auto& s = set.schedules.at(id);
        std::fill(s.begin(), s.end(), false);
    }
}

void check_fraction(double f, std::string_view what)
{
    if (!(f >= 0.0 && f < 1.0))
    {
        throw ConfigError(fmt::format("{} must be in [0, 1) (got {})", what, f));
    }
}
}  // namespace

std::string_view to_string(Scenario s) { return kScenarioNames[static_cast<std::size_t>(s)]; }

std::optional<Scenario> scenario_from_string(std::string_view s)
{
    for (std::size_t i = 0; i < kScenarioNames.size(); ++i)
    {
        if (kScenarioNames[i] == s)
        {
            return static_cast<Scenario>(i);
        }
    }
    return std::nullopt;
}

std::size_t TimeWindow::steps(long long dt) const
{
    if (dt <= 0)
    {
        throw RangeError(fmt::format("step must be positive (got {} s)", dt));
    }
    long long const span = (end - start).count();
    if (span <= 0 || span % dt != 0)
    {
        throw RangeError(fmt::format("window [{}, {}) must span a positive multiple of {} s", format_iso8601(start),
                                     format_iso8601(end), dt));
    }
    return static_cast<std::size_t>(span / dt);
}

std::vector<bool> const& PowerScheduleSet::at(BuildingId id) const
{
    auto it = schedules.find(id);
    if (it == schedules.end())
    {
        throw RangeError(fmt::format("no schedule for building {}", id));
    }
    return it->second;
}

PowerScheduleSet build_base_schedule(Population const& pop, TimeWindow window, long long dt)
{
    return all_powered(pop, window, dt, Scenario::base);
}

std::set<BuildingId> select_isolated(Population const& pop, double fault_fraction, std::uint64_t seed)
{
    check_fraction(fault_fraction, "fault_fraction");
    std::vector<BuildingId> ids;
    ids.reserve(pop.buildings.size());
    for (auto const& b : pop.buildings)
    {
        ids.push_back(b.id);
    }
    auto const k = static_cast<std::size_t>(std::llround(fault_fraction * static_cast<double>(ids.size())));
    RandomStream rng(seed, {StreamDomain::isolation, 0, 0, 0});
    auto picked = sample_without_replacement(std::move(ids), k, rng);
    return {picked.begin(), picked.end()};
}

std::set<BuildingId> sample_shed_set(Population const& pop, double fraction, std::uint64_t seed)
{
    if (!(fraction >= 0.0 && fraction <= 1.0))
    {
        throw ConfigError(fmt::format("shed fraction must be in [0, 1] (got {})", fraction));
    }
    std::vector<BuildingId> ids;
    for (auto const& b : pop.buildings)
    {
        if (b.residential())
        {
            ids.push_back(b.id);
        }
    }
    auto const k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ids.size())));
    RandomStream rng(seed, {StreamDomain::shed, 0, 0, 0});
    auto picked = sample_without_replacement(std::move(ids), k, rng);
    return {picked.begin(), picked.end()};
}

PowerScheduleSet build_controlled_outage(Population const& pop, TimeWindow window, long long dt,
                                         std::set<BuildingId> const& shed_set, double fault_fraction,
                                         std::uint64_t seed)
{
    auto set = all_powered(pop, window, dt, Scenario::co);
    for (BuildingId id : shed_set)
    {
        if (!set.schedules.contains(id))
        {
            throw ConfigError(fmt::format("shed set names unknown building id {}", id));
        }
    }
    set.isolated_ids = select_isolated(pop, fault_fraction, seed);
    darken(set, shed_set);
    darken(set, set.isolated_ids);
    return set;
}

std::vector<std::vector<BuildingId>> rolling_groups(Population const& pop, int n_groups)
{
    if (n_groups < 2)
    {
        throw ConfigError(fmt::format("n_groups must be at least 2 (got {})", n_groups));
    }
    std::vector<Building const*> res;
    for (auto const& b : pop.buildings)
    {
        if (b.residential())
        {
            res.push_back(&b);
        }
    }
    std::sort(res.begin(), res.end(), [](Building const* a, Building const* b) {
        if (a->avg_annual_kwh != b->avg_annual_kwh)
        {
            return a->avg_annual_kwh > b->avg_annual_kwh;
        }
        return a->id < b->id;
    });
    auto const g = static_cast<std::size_t>(n_groups);
    std::vector<std::vector<BuildingId>> groups(g);
    for (std::size_t k = 0; k < g; ++k)
    {
        std::size_t const lo = k * res.size() / g;
        std::size_t const hi = (k + 1) * res.size() / g;
        for (std::size_t i = lo; i < hi; ++i)
        {
            groups[k].push_back(res[i]->id);
        }
    }
    return groups;
}

int powered_group_count(double availability, int n_groups)
{
    // The epsilon keeps fractions such as 2/3 from flooring one group short.
    return std::clamp(static_cast<int>(std::floor(availability * n_groups + 1e-9)), 0, n_groups);
}

PowerScheduleSet build_rolling_outage(Population const& pop, TimeWindow window, long long dt, int n_groups,
                                      AvailabilitySeries const& availability, bool hardened, double fault_fraction,
                                      std::uint64_t seed)
{
    auto set = all_powered(pop, window, dt, hardened ? Scenario::ro_hi : Scenario::ro_di);
    std::size_t const n = window.steps(dt);
    double const slot_seconds = availability.slot_hours * 3600.0;
    if (!(slot_seconds > 0.0) || std::fmod(slot_seconds, static_cast<double>(dt)) != 0.0)
    {
        throw ConfigError(fmt::format("slot length {} h is not a multiple of the {} s step", availability.slot_hours,
                                      dt));
    }
    auto const slot_steps = static_cast<std::size_t>(slot_seconds) / static_cast<std::size_t>(dt);
    std::size_t const n_slots = (n + slot_steps - 1) / slot_steps;
    if (availability.fractions.size() < n_slots)
    {
        throw ConfigError(fmt::format("availability series has {} slots but the window needs {}",
                                      availability.fractions.size(), n_slots));
    }
    for (double a : availability.fractions)
    {
        if (!(a >= 0.0 && a <= 1.0))
        {
            throw ConfigError(fmt::format("availability fraction {} outside [0, 1]", a));
        }
    }

    auto const groups = rolling_groups(pop, n_groups);
    auto const g = static_cast<std::size_t>(n_groups);
    std::size_t offset = 0;
    std::vector<bool> group_on(g);
    for (std::size_t s = 0; s < n_slots; ++s)
    {
        auto const k = static_cast<std::size_t>(powered_group_count(availability.fractions[s], n_groups));
        std::fill(group_on.begin(), group_on.end(), false);
        for (std::size_t j = 0; j < k; ++j)
        {
            group_on[(offset + j) % g] = true;
        }
        offset = (offset + k) % g;
        std::size_t const i0 = s * slot_steps;
        std::size_t const i1 = std::min(n, i0 + slot_steps);
        for (std::size_t grp = 0; grp < g; ++grp)
        {
            if (group_on[grp])
            {
                continue;
            }
            for (BuildingId id : groups[grp])
            {
                auto& sched = set.schedules.at(id);
                std::fill(sched.begin() + static_cast<std::ptrdiff_t>(i0),
                          sched.begin() + static_cast<std::ptrdiff_t>(i1), false);
            }
        }
    }

    if (!hardened)
    {
        set.isolated_ids = select_isolated(pop, fault_fraction, seed);
        darken(set, set.isolated_ids);
    }
    return set;
}

double max_contiguous_off(std::vector<bool> const& schedule, long long dt)
{
    std::size_t best = 0;
    std::size_t run = 0;
    for (bool on : schedule)
    {
        run = on ? 0 : run + 1;
        best = std::max(best, run);
    }
    return static_cast<double>(best) * static_cast<double>(dt) / 3600.0;
}

double unpowered_hours(std::vector<bool> const& schedule, long long dt)
{
    auto const off = std::count(schedule.begin(), schedule.end(), false);
    return static_cast<double>(off) * static_cast<double>(dt) / 3600.0;
}

std::string schedules_to_csv(PowerScheduleSet const& set)
{
    std::string out = "building_id,slot_start,powered\n";
    for (auto const& [id, sched] : set.schedules)
    {
        for (std::size_t i = 0; i < sched.size(); ++i)
        {
            if (i == 0 || sched[i] != sched[i - 1])
            {
                auto const t = set.window.start + std::chrono::seconds(set.dt * static_cast<long long>(i));
                out += fmt::format("{},{},{}\n", id, format_iso8601(t), sched[i] ? 1 : 0);
            }
        }
    }
    return out;
}

}  // namespace outval
