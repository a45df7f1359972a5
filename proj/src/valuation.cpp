#include "outval/valuation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "outval/error.hpp"

namespace outval
{

namespace
{
// Runs body(i) for i in [0, n) on up to `threads` workers pulling indices
// from a shared counter. Each index is processed exactly once.
template <typename F>
void parallel_for(std::size_t n, unsigned threads, F const& body)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (threads == 1)
    {
        for (std::size_t i = 0; i < n; ++i)
        {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
    {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n && !failed; i = next++)
            {
                try
                {
                    body(i);
                }
                catch (...)
                {
                    if (!failed.exchange(true))
                    {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool)
    {
        th.join();
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }
}

void check_range(CostRange const& r, std::string_view name)
{
    if (!(r.min >= 0.0 && r.min <= r.max))
    {
        throw ConfigError(fmt::format("{}: need 0 <= min <= max (got [{}, {}])", name, r.min, r.max));
    }
}
}  // namespace

double CostRange::at(double ratio) const { return min + (max - min) * std::clamp(ratio, 0.0, 1.0); }

void ValuationParams::validate() const
{
    if (!(vsl > 0.0))
    {
        throw ConfigError(fmt::format("vsl must be positive (got {})", vsl));
    }
    if (!(severity_ceiling > 0.0))
    {
        throw ConfigError("medical severity ceiling must be positive");
    }
    if (!(home_recovery_fraction >= 0.0))
    {
        throw ConfigError("home recovery fraction must be non-negative");
    }
    for (std::size_t c = 0; c < kConditionCount; ++c)
    {
        check_range(medical_insured[c], "medical_insured");
        check_range(medical_uninsured[c], "medical_uninsured");
    }
    check_range(pipe_insured, "pipe_insured");
    check_range(pipe_uninsured, "pipe_uninsured");
    for (std::size_t k = 0; k < kBuildingKindCount; ++k)
    {
        auto const kind = static_cast<BuildingKind>(k);
        auto it = wages.find(kind);
        if (it == wages.end() || !(it->second >= 0.0))
        {
            throw ConfigError(fmt::format("wage for '{}' missing or negative", to_string(kind)));
        }
    }
    for (auto const* h : {&residential_hours, &commercial_hours})
    {
        if (h->start_hour < 0 || h->end_hour > 24 || h->start_hour > h->end_hour)
        {
            throw ConfigError("working hours must satisfy 0 <= start <= end <= 24");
        }
    }
    for (auto const& [sector, c] : cic.sectors)
    {
        if (c.base < 0.0 || c.per_hour < 0.0 || c.per_kwh < 0.0 || c.slope < 0.0)
        {
            throw ConfigError(fmt::format("cic coefficients for '{}' must be non-negative", to_string(sector)));
        }
    }
    if (cic.season_multiplier < 0.0 || cic.backup_discount < 0.0 || cic.cap_hours < 0.0)
    {
        throw ConfigError("cic multipliers must be non-negative");
    }
}

double vsl_cost(std::vector<std::int64_t> const& deaths_per_building, double vsl)
{
    std::int64_t total = 0;
    for (auto d : deaths_per_building)
    {
        total += d;
    }
    return static_cast<double>(total) * vsl;
}

double medical_cost_for(OccupantOutcome const& o, double p_mort, ValuationParams const& params)
{
    if (o.condition == Condition::none)
    {
        return 0.0;
    }
    auto const c = static_cast<std::size_t>(o.condition);
    switch (o.status)
    {
    case OutcomeStatus::injured_recovered_hospital:
    {
        auto const& table = o.insured ? params.medical_insured : params.medical_uninsured;
        return table[c].at(p_mort / params.severity_ceiling);
    }
    case OutcomeStatus::injured_recovered_home:
        return params.home_recovery_fraction * params.medical_insured[c].min;
    default:
        return 0.0;
    }
}

double medical_cost(std::vector<OccupantOutcome> const& outcomes, std::vector<double> const& p_mort_per_outcome,
                    ValuationParams const& params)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < outcomes.size(); ++i)
    {
        sum += medical_cost_for(outcomes[i], p_mort_per_outcome.at(i), params);
    }
    return sum;
}

double productivity_cost_for(Building const& b, ExposureTrace const& trace, ProductivityModel const& model,
                             ValuationParams const& params)
{
    if (b.n_workers == 0)
    {
        return 0.0;
    }
    WorkingHours const& hours = b.residential() ? params.residential_hours : params.commercial_hours;
    double const wage = params.wages.at(b.cls.kind);
    double const dt_h = static_cast<double>(trace.dt) / 3600.0;
    double lost = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i)
    {
        auto const t = trace.start + std::chrono::seconds(trace.dt * static_cast<long long>(i));
        if (!hours.contains(local_hour(t, params.utc_offset_hours)))
        {
            continue;
        }
        double const level = (!trace.powered[i] && b.job_requires_power) ? 0.0 : model(trace.t_in[i]);
        lost += 1.0 - level;
    }
    return static_cast<double>(b.n_workers) * lost * wage * dt_h;
}

double productivity_cost(Population const& pop, std::vector<ExposureTrace> const& traces,
                         ProductivityModel const& model, ValuationParams const& params)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < pop.buildings.size(); ++i)
    {
        sum += productivity_cost_for(pop.buildings[i], traces.at(i), model, params);
    }
    return sum;
}

double repair_cost_given(double sum_wi, double beta_wi, bool insured, ValuationParams const& params)
{
    auto const& range = insured ? params.pipe_insured : params.pipe_uninsured;
    return range.at(sum_wi / beta_wi);
}

double repair_cost_for(double sum_wi, double beta_wi, HazardConfig const& hazard, ValuationParams const& params,
                       RandomStream& rng)
{
    if (!(sum_wi > 0.0))
    {
        return 0.0;
    }
    double const p_damage = std::clamp(sum_wi / beta_wi, 0.0, 1.0);
    if (!rng.bernoulli(p_damage))
    {
        return 0.0;
    }
    double const p_insured = sample_truncated_normal(hazard.home_insurance, rng) / 100.0;
    return repair_cost_given(sum_wi, beta_wi, rng.bernoulli(p_insured), params);
}

double interruption_cost(Building const& b, double hours, CICParams const& params)
{
    if (!(hours > 0.0))
    {
        return 0.0;
    }
    auto it = params.sectors.find(b.cls.sector);
    if (it == params.sectors.end())
    {
        throw ConfigError(fmt::format("no interruption-cost table for sector '{}'", to_string(b.cls.sector)));
    }
    CICSectorCoeffs const& c = it->second;
    double const capped = std::min(hours, params.cap_hours);
    double cost = c.base + c.per_hour * capped + c.per_kwh * b.avg_annual_kwh / 8760.0 * hours;
    cost *= params.season_multiplier;
    if (b.residential())
    {
        auto m = params.income_multiplier.find(b.income_bracket);
        cost *= m == params.income_multiplier.end() ? 1.0 : m->second;
    }
    else
    {
        auto m = params.industry_multiplier.find(b.cls.kind);
        cost *= m == params.industry_multiplier.end() ? 1.0 : m->second;
        if (b.backup)
        {
            cost *= params.backup_discount;
        }
    }
    return cost + c.slope * std::max(0.0, hours - params.cap_hours);
}

double interruption_cost(Building const& b, std::vector<bool> const& schedule, long long dt,
                         CICParams const& params)
{
    return interruption_cost(b, unpowered_hours(schedule, dt), params);
}

std::vector<ExposureTrace> simulate_population(Population const& pop, WeatherSeries const& weather,
                                               PowerScheduleSet const& schedules, ThermalParams const& thermal,
                                               unsigned threads)
{
    std::vector<ExposureTrace> traces(pop.buildings.size());
    parallel_for(pop.buildings.size(), threads, [&](std::size_t i) {
        auto const& b = pop.buildings[i];
        traces[i] = simulate_building(b, weather, schedules.at(b.id), thermal);
    });
    return traces;
}

ScenarioBundle prepare_bundle(Population pop, WeatherSeries const& weather, PowerScheduleSet schedules,
                              HazardConfig hazard, ValuationParams valuation, double beta_wi,
                              ThermalParams const& thermal, unsigned threads)
{
    if (!(beta_wi > 0.0))
    {
        throw ConfigError(fmt::format("beta_wi must be positive (got {})", beta_wi));
    }
    if (schedules.dt != weather.dt)
    {
        throw RangeError(fmt::format("schedule step {} s differs from weather step {} s", schedules.dt, weather.dt));
    }
    ScenarioBundle bundle;
    bundle.traces = simulate_population(pop, weather, schedules, thermal, threads);
    bundle.rh = weather.rh_out;
    std::size_t const n = pop.buildings.size();
    bundle.mean_rr.resize(n);
    bundle.p_mort.resize(n);
    bundle.sum_wi.resize(n);
    bundle.prod_cost.resize(n);
    bundle.cic_cost.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        auto const& b = pop.buildings[i];
        auto const& tr = bundle.traces[i];
        bundle.mean_rr[i] = mean_relative_risk(tr, hazard.rr, hazard.rr_window);
        bundle.p_mort[i] = base_mortality(bundle.mean_rr[i], hazard.delta);
        bundle.sum_wi[i] = winter_index(tr, bundle.rh, hazard.wi);
        bundle.prod_cost[i] = productivity_cost_for(b, tr, hazard.productivity, valuation);
        bundle.cic_cost[i] = interruption_cost(b, tr.powered, tr.dt, valuation.cic);
    }
    bundle.pop = std::move(pop);
    bundle.schedules = std::move(schedules);
    bundle.hazard = std::move(hazard);
    bundle.valuation = std::move(valuation);
    bundle.beta_wi = beta_wi;
    return bundle;
}

CostBreakdown run_trial(ScenarioBundle const& bundle, std::uint32_t trial_index, std::uint64_t master_seed)
{
    CostBreakdown out;
    auto const& buildings = bundle.pop.buildings;
    for (std::size_t i = 0; i < buildings.size(); ++i)
    {
        auto const& b = buildings[i];
        auto const entity = static_cast<std::uint32_t>(i);
        double const p_mort = bundle.p_mort[i];
        if (p_mort > 0.0)
        {
            for (int o = 0; o < b.n_occupants; ++o)
            {
                RandomStream rng(master_seed,
                                 {StreamDomain::occupant, trial_index, entity, static_cast<std::uint32_t>(o)});
                if (!rng.bernoulli(p_mort))
                {
                    continue;
                }
                // Percentages are only needed once the occupant is at risk.
                auto const probs = draw_outcome_probabilities(bundle.hazard, rng);
                auto const outcome = resolve_at_risk_outcome(probs, rng);
                ++out.n_at_risk;
                if (outcome.status == OutcomeStatus::death)
                {
                    ++out.n_death;
                }
                else
                {
                    ++out.n_injured;
                    out.c_medical += medical_cost_for(outcome, p_mort, bundle.valuation);
                }
            }
        }
        if (bundle.sum_wi[i] > 0.0)
        {
            RandomStream rng(master_seed, {StreamDomain::building_damage, trial_index, entity, 0});
            out.c_build += repair_cost_for(bundle.sum_wi[i], bundle.beta_wi, bundle.hazard, bundle.valuation, rng);
        }
        out.c_prod += bundle.prod_cost[i];
        out.c_cic += bundle.cic_cost[i];
    }
    out.c_vsl = static_cast<double>(out.n_death) * bundle.valuation.vsl;
    return out;
}

std::vector<CostBreakdown> run_monte_carlo(ScenarioBundle const& bundle, std::uint32_t n_trials,
                                           std::uint64_t master_seed, unsigned threads)
{
    if (n_trials == 0)
    {
        throw ConfigError("n_trials must be at least 1");
    }
    std::vector<CostBreakdown> results(n_trials);
    parallel_for(n_trials, threads, [&](std::size_t t) {
        results[t] = run_trial(bundle, static_cast<std::uint32_t>(t), master_seed);
    });
    return results;
}

ComponentStats component_stats(std::vector<double> values)
{
    if (values.empty())
    {
        throw std::invalid_argument("statistics of an empty sample");
    }
    std::size_t const n = values.size();
    ComponentStats s;
    double sum = 0.0;
    for (double v : values)
    {
        sum += v;
    }
    s.mean = sum / static_cast<double>(n);
    if (n > 1)
    {
        double ss = 0.0;
        for (double v : values)
        {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.std = std::sqrt(ss / static_cast<double>(n - 1));
    }
    std::sort(values.begin(), values.end());
    auto rank = [&](double p) {
        auto r = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
        return values[std::clamp<std::size_t>(r, 1, n) - 1];
    };
    s.p5 = rank(5.0);
    s.p50 = rank(50.0);
    s.p95 = rank(95.0);
    s.min = values.front();
    s.max = values.back();
    return s;
}

std::vector<HistogramBin> histogram(std::vector<double> const& values, std::size_t bins)
{
    if (values.empty() || bins == 0)
    {
        throw std::invalid_argument("histogram needs values and at least one bin");
    }
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double const lo = *lo_it;
    double const hi = *hi_it;
    double const width = (hi - lo) / static_cast<double>(bins);
    std::vector<HistogramBin> out(bins);
    for (std::size_t k = 0; k < bins; ++k)
    {
        out[k].lo = lo + width * static_cast<double>(k);
        out[k].hi = k + 1 == bins ? hi : lo + width * static_cast<double>(k + 1);
    }
    for (double v : values)
    {
        std::size_t k = width > 0.0 ? static_cast<std::size_t>((v - lo) / width) : 0;
        out[std::min(k, bins - 1)].count++;
    }
    return out;
}

double component_value(CostBreakdown const& c, std::string_view name)
{
    if (name == "c_vsl") return c.c_vsl;
    if (name == "c_medical") return c.c_medical;
    if (name == "c_prod") return c.c_prod;
    if (name == "c_build") return c.c_build;
    if (name == "c_cic") return c.c_cic;
    if (name == "nei") return c.nei();
    if (name == "total") return c.total();
    if (name == "n_death") return static_cast<double>(c.n_death);
    if (name == "n_injured") return static_cast<double>(c.n_injured);
    throw std::invalid_argument(fmt::format("unknown cost component '{}'", name));
}

Summary summarize(std::vector<CostBreakdown> const& trials, std::size_t bins)
{
    if (trials.empty())
    {
        throw std::invalid_argument("cannot summarize zero trials");
    }
    Summary s;
    s.n_trials = trials.size();
    std::vector<double> values(trials.size());
    for (auto name : kSummaryComponents)
    {
        for (std::size_t t = 0; t < trials.size(); ++t)
        {
            values[t] = component_value(trials[t], name);
        }
        s.components.emplace(std::string(name), component_stats(values));
        if (name == "total")
        {
            s.total_histogram = histogram(values, bins);
        }
    }
    return s;
}

std::string trials_to_csv(std::vector<CostBreakdown> const& trials)
{
    std::string out = "trial,c_vsl,c_medical,c_prod,c_build,c_cic,nei,total,n_death,n_injured,n_at_risk\n";
    for (std::size_t t = 0; t < trials.size(); ++t)
    {
        auto const& c = trials[t];
        out += fmt::format("{},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{},{},{}\n", t, c.c_vsl, c.c_medical,
                           c.c_prod, c.c_build, c.c_cic, c.nei(), c.total(), c.n_death, c.n_injured, c.n_at_risk);
    }
    return out;
}

std::string histogram_to_csv(std::vector<HistogramBin> const& bins)
{
    std::string out = "bin_lo,bin_hi,count\n";
    for (auto const& b : bins)
    {
        out += fmt::format("{:.2f},{:.2f},{}\n", b.lo, b.hi, b.count);
    }
    return out;
}

}  // namespace outval
