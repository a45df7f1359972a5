#pragma once

// Single-zone equivalent-thermal-parameter building model.
//
//   C dT/dt = ua (t_out - T) + Q
//
// integrated exactly over each step with piecewise-constant inputs, so the
// update is unconditionally stable and matches the analytic solution.

#include <vector>

#include "outval/population.hpp"
#include "outval/timeutil.hpp"
#include "outval/weather.hpp"

namespace outval
{

struct ThermalParams
{
    double residential_gain_w = 200.0;  // occupied residential buildings
    double commercial_gain_w = 0.0;
    double gas_blower_kw = 0.4;  // electric draw of a gas furnace's air handler
};

struct ThermalState
{
    double t_in = 0.0;
    bool hvac_on = false;
    double heating_energy_kwh = 0.0;  // electric energy drawn by the heating system
};

struct ExposureTrace
{
    BuildingId building_id = 0;
    Timestamp start{};
    long long dt = 0;
    std::vector<double> t_in;  // temperature at the start of each step
    std::vector<bool> powered;
    std::vector<double> hvac_electric_kw;
    double heating_energy_kwh = 0.0;

    std::size_t size() const { return t_in.size(); }
};

struct HvacDecision
{
    bool on = false;
    double electric_kw = 0.0;
};

/// Indoor temperature after dt seconds of constant t_out and heat input.
double step_indoor_temp(double t_in, Building const& b, double t_out, double hvac_heat_w, double internal_gain_w,
                        double dt);

/// Hysteresis thermostat with power gating. `was_on` is the previous state,
/// held while t_in is inside the deadband.
HvacDecision hvac_thermostat(double t_in, double setpoint, double deadband, bool powered, bool was_on,
                             double rated_kw);

/// Electric draw of the heating system while running.
double rated_electric_kw(Building const& b, ThermalParams const& params);
double internal_gain_w(Building const& b, ThermalParams const& params);

/// Starts at the setpoint with the heater off. `powered` must have one entry per
/// weather sample; throws RangeError otherwise.
ExposureTrace simulate_building(Building const& b, WeatherSeries const& weather, std::vector<bool> const& powered,
                                ThermalParams const& params = {});

}  // namespace outval
