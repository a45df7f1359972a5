#include <doctest.h>

#include <cmath>

#include "outval/error.hpp"
#include "outval/population.hpp"
#include "outval/thermal.hpp"
#include "outval/weather.hpp"

using namespace outval;

namespace
{
Building house(Insulation ins, double area = 150.0)
{
    PopulationSpec spec;
    auto const env = spec.insulation_table[static_cast<std::size_t>(ins)];
    Building b;
    b.id = 1;
    b.insulation = ins;
    b.floor_area = area;
    b.ua = env.ua_per_m2 * area;
    b.thermal_mass = env.c_per_m2 * area;
    b.setpoint = 21.0;
    b.deadband = 1.0;
    b.hvac_heat_capacity = b.ua * (b.setpoint - spec.hvac_design_outdoor_c) * spec.hvac_oversizing;
    b.n_occupants = 2;
    b.avg_annual_kwh = 10000;
    return b;
}

WeatherSeries event_weather()
{
    auto const w = load_weather_csv(OUTVAL_DATA_DIR "/demo/weather_uri_like.csv");
    return slice_window(w, *parse_iso8601("2021-02-15T06:00:00Z"), *parse_iso8601("2021-02-19T06:00:00Z"));
}

double min_of(std::vector<double> const& v) { return *std::min_element(v.begin(), v.end()); }
double mean_of(std::vector<double> const& v)
{
    double s = 0.0;
    for (double x : v)
    {
        s += x;
    }
    return s / static_cast<double>(v.size());
}
}  // namespace

TEST_CASE("step_indoor_temp closed-form cases")
{
    Building b = house(Insulation::average);
    CHECK(step_indoor_temp(5.0, b, 5.0, 0.0, 0.0, 300.0) == doctest::Approx(5.0).epsilon(1e-15));

    double const dt = std::log(2.0) * b.thermal_mass / b.ua;
    CHECK(step_indoor_temp(20.0, b, 0.0, 0.0, 0.0, dt) == doctest::Approx(10.0).epsilon(1e-12));

    // Heat input shifts the equilibrium by Q/ua.
    double const q = 2.0 * b.ua;
    CHECK(step_indoor_temp(2.0, b, 0.0, q, 0.0, 1e9) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("24 h free-float matches the analytic exponential")
{
    Building b = house(Insulation::poor);
    b.n_occupants = 0;
    WeatherSeries w;
    w.dt = 300;
    w.t_out.assign(288, -3.0);
    w.rh_out.assign(288, 60.0);
    auto const tr = simulate_building(b, w, std::vector<bool>(288, false));
    double max_err = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i)
    {
        long double const t = static_cast<long double>(i) * 300.0L;
        long double const exact = -3.0L + (21.0L + 3.0L) * std::exp(-static_cast<long double>(b.ua) * t
                                                                   / static_cast<long double>(b.thermal_mass));
        max_err = std::max(max_err, static_cast<double>(std::fabs(static_cast<long double>(tr.t_in[i]) - exact)));
    }
    CHECK(max_err < 1e-9);
    for (std::size_t i = 1; i < tr.size(); ++i)
    {
        CHECK(tr.t_in[i] < tr.t_in[i - 1]);
    }
}

TEST_CASE("thermostat hysteresis and power gating")
{
    auto off = hvac_thermostat(-40.0, 21.0, 1.0, false, true, 9.0);
    CHECK_FALSE(off.on);
    CHECK(off.electric_kw == 0.0);

    auto cold = hvac_thermostat(10.0, 21.0, 1.0, true, false, 9.0);
    CHECK(cold.on);
    CHECK(cold.electric_kw == 9.0);

    CHECK(hvac_thermostat(21.2, 21.0, 1.0, true, true, 9.0).on);
    CHECK_FALSE(hvac_thermostat(21.2, 21.0, 1.0, true, false, 9.0).on);
    CHECK_FALSE(hvac_thermostat(21.6, 21.0, 1.0, true, true, 9.0).on);
    CHECK(hvac_thermostat(20.4, 21.0, 1.0, true, false, 9.0).on);

    ThermalParams params;
    Building b = house(Insulation::average);
    CHECK(rated_electric_kw(b, params) == doctest::Approx(b.hvac_heat_capacity / 1000.0));
    b.heating_fuel = HeatingFuel::gas_with_electric_blower;
    CHECK(rated_electric_kw(b, params) == params.gas_blower_kw);
}

TEST_CASE("continuous power holds the deadband band")
{
    auto const w = event_weather();
    for (std::size_t k = 0; k < kInsulationCount; ++k)
    {
        Building b = house(static_cast<Insulation>(k));
        b.setpoint = 20.0;
        auto const tr = simulate_building(b, w, std::vector<bool>(w.size(), true));
        for (std::size_t i = 12; i < tr.size(); ++i)
        {
            REQUIRE(tr.t_in[i] >= 19.3);
            REQUIRE(tr.t_in[i] <= 20.7);
        }
        CHECK(tr.heating_energy_kwh > 0.0);
    }
}

TEST_CASE("four dark days: poor insulation falls below -5 C, very good stays warmer")
{
    auto const w = event_weather();
    std::vector<bool> const dark(w.size(), false);
    auto const poor = simulate_building(house(Insulation::poor), w, dark);
    auto const little = simulate_building(house(Insulation::little), w, dark);
    auto const very_good = simulate_building(house(Insulation::very_good), w, dark);
    CHECK(min_of(poor.t_in) < -5.0);
    CHECK(min_of(very_good.t_in) > min_of(poor.t_in));
    CHECK(mean_of(very_good.t_in) > mean_of(poor.t_in));
    CHECK(mean_of(poor.t_in) > mean_of(little.t_in));
    for (double kw : poor.hvac_electric_kw)
    {
        CHECK(kw == 0.0);
    }
}

TEST_CASE("indoor temperature stays within physical bounds")
{
    auto const w = event_weather();
    Building b = house(Insulation::below_average);
    b.n_occupants = 0;
    std::vector<bool> sched(w.size());
    for (std::size_t i = 0; i < sched.size(); ++i)
    {
        sched[i] = (i / 12) % 3 == 0;
    }
    auto const tr = simulate_building(b, w, sched);
    double const t_out_min = min_of(w.t_out);
    double const t_out_max = *std::max_element(w.t_out.begin(), w.t_out.end());
    double const t_eq_heat = t_out_max + b.hvac_heat_capacity / b.ua;
    for (std::size_t i = 0; i < tr.size(); ++i)
    {
        CHECK(tr.t_in[i] >= std::min(b.setpoint, t_out_min));
        CHECK(tr.t_in[i] <= std::max({b.setpoint, t_out_max, t_eq_heat}));
        if (!tr.powered[i])
        {
            CHECK(tr.hvac_electric_kw[i] == 0.0);
        }
    }
    CHECK_THROWS_AS(simulate_building(b, w, std::vector<bool>(w.size() - 1, true)), RangeError);
}
