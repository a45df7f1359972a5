#include <doctest.h>

#include <cmath>

#include "outval/error.hpp"
#include "outval/hazard.hpp"

using namespace outval;

namespace
{
ExposureTrace constant_trace(double t, std::size_t n, bool powered = true)
{
    ExposureTrace tr;
    tr.dt = 300;
    tr.t_in.assign(n, t);
    tr.powered.assign(n, powered);
    tr.hvac_electric_kw.assign(n, 0.0);
    return tr;
}

OutcomeProbabilities table_means()
{
    HazardConfig cfg;
    OutcomeProbabilities p;
    p.p_pre_c = cfg.pre_cardiac.mean / 100.0;
    p.p_pre_r = cfg.pre_respiratory.mean / 100.0;
    p.p_access = cfg.access.mean / 100.0;
    for (std::size_t c = 0; c < kConditionCount; ++c)
    {
        p.hospital_surv[c] = cfg.hospital_survival[c].mean / 100.0;
        p.home_surv[c] = cfg.home_survival[c].mean / 100.0;
    }
    p.p_heal_ins = cfg.health_insurance.mean / 100.0;
    return p;
}
}  // namespace

TEST_CASE("default RR model is normalized, clamped and monotone on its cold limb")
{
    auto const m = RRModel::default_model();
    CHECK_NOTHROW(m.validate());
    CHECK(m.grid_minimum() >= 1.0 - 1e-9);
    CHECK(m.grid_minimum() <= 1.0 + 1e-6);
    CHECK(relative_risk(m.t_max, m) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(relative_risk(-40.0, m) == relative_risk(m.t_min, m));
    CHECK(relative_risk(35.0, m) == relative_risk(m.t_max, m));

    double const cold = relative_risk(-10.0, m);
    CHECK(cold > 1.0);
    CHECK(cold < 2.0);
    CHECK(cold > relative_risk(10.0, m));
    for (double t = m.t_min; t < m.t_max; t += 0.1)
    {
        CHECK(relative_risk(t, m) >= relative_risk(t + 0.1, m) - 1e-12);
    }
    CHECK(m.fit_rms_residual < 0.01);
    CHECK(m.fit_points.size() == RRModel::default_fit_points().size());
}

TEST_CASE("RR validation rejects unnormalized coefficients")
{
    RRModel m;
    m.a = {0, 0, 0, 0, 1.2};
    CHECK_THROWS_AS(m.validate(), ConfigError);
    m.a = {0, 0, 0, 0, 1.0};
    CHECK_NOTHROW(m.validate());
    CHECK_THROWS_AS(RRModel::fit({{1, 1}, {2, 1}}, -15, 20), ConfigError);
}

TEST_CASE("base mortality")
{
    auto const m = RRModel::default_model();
    CHECK(base_mortality(constant_trace(21.0, 50), m, 0.0) == 0.0);
    CHECK(base_mortality(1.43, 0.0) == doctest::Approx(0.43));
    CHECK(base_mortality(1.1, 0.05) == doctest::Approx(0.15));
    CHECK(base_mortality(1.0, -0.2) == 0.0);
    CHECK(base_mortality(2.5, 0.0) == 1.0);

    auto tr = constant_trace(21.0, 10);
    tr.t_in[0] = -10.0;
    tr.powered[0] = false;
    double const whole = mean_relative_risk(tr, m, RRWindow::whole_event);
    double const dark = mean_relative_risk(tr, m, RRWindow::unpowered_only);
    CHECK(dark == doctest::Approx(m(-10.0)));
    CHECK(whole == doctest::Approx((m(-10.0) + 9.0) / 10.0));
    CHECK(mean_relative_risk(constant_trace(5.0, 4), m, RRWindow::unpowered_only) == 1.0);

    double prev = 0.0;
    for (double t = 25.0; t >= -20.0; t -= 0.5)
    {
        double const p = base_mortality(constant_trace(t, 3), m, 0.0);
        CHECK(p >= prev);
        prev = p;
    }
}

TEST_CASE("productivity")
{
    auto const m = ProductivityModel::default_model();
    CHECK_NOTHROW(m.validate());
    double best = 0.0;
    double arg = 0.0;
    for (double t = 0.0; t <= 35.0; t += 0.001)
    {
        if (productivity(t, m) > best)
        {
            best = productivity(t, m);
            arg = t;
        }
    }
    CHECK(best == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(arg > 21.0);
    CHECK(arg < 23.5);
    CHECK(productivity(-30.0, m) == productivity(0.0, m));
    CHECK(productivity(-30.0, m) >= 0.0);
    CHECK(productivity(18.0, m) > productivity(10.0, m));
    for (double t = -50.0; t <= 60.0; t += 0.25)
    {
        CHECK(productivity(t, m) >= 0.0);
        CHECK(productivity(t, m) <= 1.0);
    }
}

TEST_CASE("winter index")
{
    WinterIndexParams p;
    auto warm = constant_trace(0.5, 4);
    CHECK(winter_index(warm, {95, 95, 95, 95}, p) == 0.0);

    auto tr = constant_trace(5.0, 3);
    tr.t_in[1] = -5.0;
    CHECK(winter_index(tr, {90, 90, 90}, p) == doctest::Approx(50.0));

    CHECK(winter_index(constant_trace(-20.0, 3), {80, 70, 10}, p) == 0.0);

    p.indoor_rh = 85.0;
    CHECK(winter_index(constant_trace(-2.0, 3), {10, 10, 10}, p) == doctest::Approx(30.0));
    CHECK_THROWS_AS(winter_index(tr, {90, 90}, p), RangeError);
}

TEST_CASE("truncated normal sampling")
{
    RandomStream rng(3, {});
    TruncNormalParams const access{89.4, 3.0, 0.0, 100.0};
    double sum = 0.0;
    constexpr int n = 1000000;
    for (int i = 0; i < n; ++i)
    {
        double const x = sample_truncated_normal(access, rng);
        REQUIRE(x >= 0.0);
        REQUIRE(x <= 100.0);
        sum += x;
    }
    CHECK(std::abs(sum / n - 89.4) < 0.1);

    TruncNormalParams const cardiac{5.1, 1.0, 0.0, 100.0};
    sum = 0.0;
    for (int i = 0; i < n; ++i)
    {
        sum += sample_truncated_normal(cardiac, rng);
    }
    CHECK(std::abs(sum / n - 5.1) < 0.05);

    TruncNormalParams const narrow{42.0, 1e-9, 0.0, 100.0};
    for (int i = 0; i < 100; ++i)
    {
        CHECK(sample_truncated_normal(narrow, rng) == doctest::Approx(42.0).epsilon(1e-9));
    }

    CHECK_NOTHROW(validate(access, "access"));
    CHECK_THROWS_AS(validate({0.0, 1.0, 8.0, 9.0}, "far tail"), ConfigError);
    CHECK_THROWS_AS(validate({0.0, 0.0, 0.0, 1.0}, "zero std"), ConfigError);
    CHECK_THROWS_AS(validate({0.0, 1.0, 2.0, 1.0}, "inverted"), ConfigError);
    CHECK(acceptance_probability({0.0, 1.0, 0.0, 1e9}) == doctest::Approx(0.5));
}

TEST_CASE("outcome tree forced paths")
{
    RandomStream rng(5, {});
    auto p = table_means();
    for (int i = 0; i < 1000; ++i)
    {
        auto const o = simulate_occupant_outcome(0.0, p, rng);
        CHECK(o.status == OutcomeStatus::unaffected);
        CHECK(o.condition == Condition::none);
    }
    p.p_access = 1.0;
    p.hospital_surv = {1.0, 1.0, 1.0};
    for (int i = 0; i < 1000; ++i)
    {
        auto const o = simulate_occupant_outcome(1.0, p, rng);
        CHECK(o.status == OutcomeStatus::injured_recovered_hospital);
        CHECK(o.condition != Condition::none);
        CHECK(o.accessed_healthcare);
    }
}

TEST_CASE("outcome tree marginals and death frequency match the closed form")
{
    auto const p = table_means();
    double const p_mort = 0.3;
    std::array<double, kConditionCount> const pc{p.p_pre_c, p.p_pre_r, 1.0 - p.p_pre_c - p.p_pre_r};
    double death = 0.0;
    for (std::size_t c = 0; c < kConditionCount; ++c)
    {
        death += pc[c] * (p.p_access * (1.0 - p.hospital_surv[c]) + (1.0 - p.p_access) * (1.0 - p.home_surv[c]));
    }
    death *= p_mort;

    constexpr int n = 1000000;
    RandomStream rng(77, {});
    std::array<int, 4> cond{};
    int deaths = 0;
    int at_risk = 0;
    for (int i = 0; i < n; ++i)
    {
        auto const o = simulate_occupant_outcome(p_mort, p, rng);
        cond[static_cast<std::size_t>(o.condition)]++;
        deaths += o.status == OutcomeStatus::death ? 1 : 0;
        at_risk += o.status == OutcomeStatus::unaffected ? 0 : 1;
        CHECK((o.condition == Condition::none) == (o.status == OutcomeStatus::unaffected));
    }
    auto within3 = [](double count, double trials, double prob) {
        return std::abs(count - trials * prob) <= 3.0 * std::sqrt(trials * prob * (1.0 - prob));
    };
    CHECK(within3(deaths, n, death));
    CHECK(within3(at_risk, n, p_mort));
    CHECK(within3(cond[0], at_risk, p.p_pre_c));
    CHECK(within3(cond[1], at_risk, p.p_pre_r));
}

TEST_CASE("hazard config validation")
{
    HazardConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.access.max = 120.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = HazardConfig{};
    cfg.wi.rh_crit = 150.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
