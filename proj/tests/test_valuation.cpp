#include <doctest.h>

#include <cmath>

#include "outval/error.hpp"
#include "outval/valuation.hpp"

using namespace outval;

namespace
{
Building office(BuildingId id, int workers)
{
    Building b;
    b.id = id;
    b.cls = {BuildingKind::office, Sector::medium_ci};
    b.ua = 1000;
    b.thermal_mass = 1e8;
    b.avg_annual_kwh = 500000;
    b.n_workers = workers;
    b.n_occupants = workers;
    b.job_requires_power = true;
    return b;
}

ExposureTrace trace_at(double t_in, std::size_t n, long long dt, bool powered, char const* start)
{
    ExposureTrace tr;
    tr.start = *parse_iso8601(start);
    tr.dt = dt;
    tr.t_in.assign(n, t_in);
    tr.powered.assign(n, powered);
    tr.hvac_electric_kw.assign(n, 0.0);
    return tr;
}

// Two residential buildings with fixed exposure, no weather simulation.
ScenarioBundle toy_bundle(int copies)
{
    ScenarioBundle b;
    b.valuation.cic.sectors[Sector::residential] = {5.0, 2.0, 0.1, 1.0};
    b.schedules.dt = 3600;
    for (int k = 0; k < copies; ++k)
    {
        for (int j = 0; j < 2; ++j)
        {
            Building h;
            h.id = k * 2 + j + 1;
            h.ua = 300;
            h.thermal_mass = 3e7;
            h.avg_annual_kwh = 12000;
            h.n_occupants = 50;
            b.pop.buildings.push_back(h);
            b.pop.total_occupants += h.n_occupants;
            auto tr = trace_at(j == 0 ? -5.0 : 10.0, 24, 3600, j == 1, "2021-02-15T06:00:00Z");
            b.schedules.schedules[h.id] = tr.powered;
            b.traces.push_back(tr);
            b.mean_rr.push_back(mean_relative_risk(tr, b.hazard.rr));
            b.p_mort.push_back(base_mortality(b.mean_rr.back(), 0.05));
            b.sum_wi.push_back(j == 0 ? 100.0 : 0.0);
            b.prod_cost.push_back(0.0);
            b.cic_cost.push_back(interruption_cost(h, tr.powered, tr.dt, b.valuation.cic));
        }
    }
    b.beta_wi = 200.0;
    return b;
}
}  // namespace

TEST_CASE("vsl cost")
{
    CHECK(vsl_cost({0, 0, 0}, 11.6e6) == 0.0);
    CHECK(vsl_cost({1}, 11.6e6) == 11.6e6);
    CHECK(vsl_cost({1, 0, 2}, 11.6e6) == 3 * 11.6e6);
}

TEST_CASE("medical cost")
{
    ValuationParams v;
    CHECK(medical_cost({}, {}, v) == 0.0);
    OccupantOutcome o{OutcomeStatus::injured_recovered_hospital, Condition::cardiac, true, true};
    CHECK(medical_cost({o}, {v.severity_ceiling}, v) == doctest::Approx(6282.0));
    o.insured = false;
    CHECK(medical_cost({o}, {0.0}, v) == doctest::Approx(3162.0));
    CHECK(medical_cost_for(o, 0.25, v) == doctest::Approx(3162.0 + 0.5 * (15348.0 - 3162.0)));
    o.status = OutcomeStatus::death;
    CHECK(medical_cost_for(o, 0.3, v) == 0.0);
    o.status = OutcomeStatus::injured_recovered_home;
    CHECK(medical_cost_for(o, 0.3, v) == doctest::Approx(0.25 * 1014.0));
    CHECK(medical_cost_for(OccupantOutcome{}, 0.3, v) == 0.0);
}

TEST_CASE("productivity cost")
{
    ValuationParams v;
    auto const model = ProductivityModel::default_model();
    Building b = office(1, 10);

    // Near the curve's peak the loss is negligible.
    double best_t = 20.0;
    for (double t = 20.0; t < 23.0; t += 0.0001)
    {
        best_t = model(t) > model(best_t) ? t : best_t;
    }
    auto comfy = trace_at(best_t, 24, 3600, true, "2021-02-15T00:00:00Z");
    CHECK(productivity_cost_for(b, comfy, model, v) < 1e-3);

    // 8 working hours at productivity 0 because the power is out.
    auto dark = trace_at(best_t, 8, 3600, false, "2021-02-15T08:00:00Z");
    CHECK(productivity_cost_for(b, dark, model, v) == doctest::Approx(3030.40));

    // Hours outside business hours are not counted.
    auto night = trace_at(best_t, 6, 3600, false, "2021-02-15T00:00:00Z");
    CHECK(productivity_cost_for(b, night, model, v) == 0.0);

    // The same hours in UTC-6 fall inside the working day.
    v.utc_offset_hours = -6;
    auto shifted = trace_at(best_t, 1, 3600, false, "2021-02-15T15:00:00Z");
    CHECK(productivity_cost_for(b, shifted, model, v) == doctest::Approx(378.80));

    b.job_requires_power = false;
    CHECK(productivity_cost_for(b, shifted, model, v) < 1e-3);
}

TEST_CASE("repair cost")
{
    ValuationParams v;
    HazardConfig h;
    RandomStream rng(1, {});
    CHECK(repair_cost_for(0.0, 100.0, h, v, rng) == 0.0);
    CHECK(repair_cost_given(100.0, 100.0, true, v) == doctest::Approx(2000.0));
    CHECK(repair_cost_given(50.0, 100.0, false, v) == doctest::Approx(2800.0));
    CHECK(repair_cost_given(500.0, 100.0, false, v) == doctest::Approx(5000.0));

    // At ratio 1 damage is certain; the cost is one of the two range maxima.
    for (int i = 0; i < 200; ++i)
    {
        double const c = repair_cost_for(100.0, 100.0, h, v, rng);
        CHECK((c == 2000.0 || c == 5000.0));
    }
}

TEST_CASE("interruption cost")
{
    CICParams p;
    p.sectors[Sector::medium_ci] = {100.0, 10.0, 0.0, 7.0};
    Building b = office(1, 5);
    CHECK(interruption_cost(b, 0.0, p) == 0.0);
    double const c16 = interruption_cost(b, 16.0, p);
    double const c32 = interruption_cost(b, 32.0, p);
    CHECK(c16 == doctest::Approx(100.0 + 160.0));
    CHECK(c32 - c16 == doctest::Approx(16.0 * 7.0));

    p.sectors[Sector::medium_ci].per_kwh = 2.0;
    CHECK(interruption_cost(b, 10.0, p) == doctest::Approx(100.0 + 100.0 + 2.0 * 500000.0 / 8760.0 * 10.0));
    b.backup = true;
    CHECK(interruption_cost(b, 10.0, p)
          == doctest::Approx(p.backup_discount * (200.0 + 2.0 * 500000.0 / 8760.0 * 10.0)));

    Building r;
    r.avg_annual_kwh = 8760.0;
    r.backup = true;
    p.sectors[Sector::residential] = {1.0, 1.0, 1.0, 0.0};
    CHECK(interruption_cost(r, 2.0, p) == doctest::Approx(1.0 + 2.0 + 2.0));
    p.income_multiplier[IncomeBracket::median] = 2.0;
    CHECK(interruption_cost(r, 2.0, p) == doctest::Approx(10.0));

    p.sectors.erase(Sector::residential);
    CHECK_THROWS_AS(interruption_cost(r, 2.0, p), ConfigError);
}

TEST_CASE("run_trial and run_monte_carlo")
{
    auto const bundle = toy_bundle(1);
    auto const a = run_trial(bundle, 3, 99);
    CHECK(a == run_trial(bundle, 3, 99));
    CHECK_FALSE(a == run_trial(bundle, 4, 99));
    CHECK(a.c_vsl == static_cast<double>(a.n_death) * bundle.valuation.vsl);
    CHECK(a.n_death + a.n_injured == a.n_at_risk);
    CHECK(a.total() == doctest::Approx(a.c_vsl + a.c_medical + a.c_prod + a.c_build + a.c_cic));

    auto const one = run_monte_carlo(bundle, 1, 99, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == run_trial(bundle, 0, 99));

    auto const serial = run_monte_carlo(bundle, 200, 99, 1);
    auto const parallel = run_monte_carlo(bundle, 200, 99, 8);
    CHECK(serial == parallel);
    for (auto const& t : serial)
    {
        CHECK(t.c_cic == serial[0].c_cic);
        CHECK(t.c_vsl >= 0.0);
        CHECK(t.c_medical >= 0.0);
        CHECK(t.c_build >= 0.0);
    }
    CHECK_THROWS_AS(run_monte_carlo(bundle, 0, 99, 1), ConfigError);
}

TEST_CASE("summaries")
{
    std::vector<CostBreakdown> trials(5);
    for (auto& t : trials)
    {
        t.c_cic = 10.0;
    }
    auto s = summarize(trials);
    auto const& cic = s.components.at("c_cic");
    CHECK(cic.std == 0.0);
    CHECK(cic.p5 == 10.0);
    CHECK(cic.p50 == 10.0);
    CHECK(cic.p95 == 10.0);
    CHECK(s.total_histogram.size() == 50);
    CHECK(s.total_histogram[0].count == 5);

    std::vector<CostBreakdown> two(2);
    two[1].c_prod = 10.0;
    CHECK(summarize(two).components.at("total").mean == 5.0);

    auto const st = component_stats({5.0, 1.0, 3.0, 2.0, 4.0});
    CHECK(st.p50 == 3.0);
    CHECK(st.min == 1.0);
    CHECK(st.max == 5.0);
    CHECK(st.std == doctest::Approx(std::sqrt(2.5)));

    CHECK_THROWS_AS(summarize({}), std::invalid_argument);

    auto const h = histogram({0.0, 1.0, 2.0, 3.0, 4.0}, 4);
    REQUIRE(h.size() == 4);
    CHECK(h[3].count == 2);
    CHECK(h[3].hi == 4.0);

    CHECK(trials_to_csv(two) == "trial,c_vsl,c_medical,c_prod,c_build,c_cic,nei,total,n_death,n_injured,n_at_risk\n"
                                "0,0.00,0.00,0.00,0.00,0.00,0.00,0.00,0,0,0\n"
                                "1,0.00,0.00,10.00,0.00,0.00,10.00,10.00,0,0,0\n");
}

TEST_CASE("valuation params validation")
{
    ValuationParams v;
    CHECK_NOTHROW(v.validate());
    v.pipe_insured = {3000, 2000};
    CHECK_THROWS_AS(v.validate(), ConfigError);
    v = ValuationParams{};
    v.wages.erase(BuildingKind::lodging);
    CHECK_THROWS_AS(v.validate(), ConfigError);
    v = ValuationParams{};
    v.vsl = 0.0;
    CHECK_THROWS_AS(v.validate(), ConfigError);
}
