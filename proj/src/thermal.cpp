#include "outval/thermal.hpp"

#include <cmath>

#include <fmt/format.h>

#include "outval/error.hpp"

namespace outval
{

double step_indoor_temp(double t_in, Building const& b, double t_out, double hvac_heat_w, double internal_gain_w,
                        double dt)
{
    double const t_eq = t_out + (hvac_heat_w + internal_gain_w) / b.ua;
    return t_eq + (t_in - t_eq) * std::exp(-b.ua * dt / b.thermal_mass);
}

HvacDecision hvac_thermostat(double t_in, double setpoint, double deadband, bool powered, bool was_on,
                             double rated_kw)
{
    if (!powered)
    {
        return {};
    }
    bool on = was_on;
    if (t_in < setpoint - deadband / 2.0)
    {
        on = true;
    }
    else if (t_in > setpoint + deadband / 2.0)
    {
        on = false;
    }
    return {on, on ? rated_kw : 0.0};
}

double rated_electric_kw(Building const& b, ThermalParams const& params)
{
    return b.heating_fuel == HeatingFuel::electric ? b.hvac_heat_capacity / 1000.0 : params.gas_blower_kw;
}

double internal_gain_w(Building const& b, ThermalParams const& params)
{
    if (!b.residential())
    {
        return params.commercial_gain_w;
    }
    return b.n_occupants > 0 ? params.residential_gain_w : 0.0;
}

ExposureTrace simulate_building(Building const& b, WeatherSeries const& weather, std::vector<bool> const& powered,
                                ThermalParams const& params)
{
    if (powered.size() != weather.size())
    {
        throw RangeError(fmt::format("building {}: schedule has {} steps but weather has {}", b.id, powered.size(),
                                     weather.size()));
    }
    std::size_t const n = weather.size();
    double const dt = static_cast<double>(weather.dt);
    double const rated_kw = rated_electric_kw(b, params);
    double const gain = internal_gain_w(b, params);

    ExposureTrace trace;
    trace.building_id = b.id;
    trace.start = weather.start;
    trace.dt = weather.dt;
    trace.t_in.resize(n);
    trace.powered = powered;
    trace.hvac_electric_kw.resize(n);

    ThermalState state{b.setpoint, false, 0.0};
    for (std::size_t i = 0; i < n; ++i)
    {
        trace.t_in[i] = state.t_in;
        auto const hvac = hvac_thermostat(state.t_in, b.setpoint, b.deadband, powered[i], state.hvac_on, rated_kw);
        state.hvac_on = hvac.on;
        trace.hvac_electric_kw[i] = hvac.electric_kw;
        state.heating_energy_kwh += hvac.electric_kw * dt / 3600.0;
        state.t_in = step_indoor_temp(state.t_in, b, weather.t_out[i], hvac.on ? b.hvac_heat_capacity : 0.0, gain,
                                      dt);
    }
    trace.heating_energy_kwh = state.heating_energy_kwh;
    return trace;
}

}  // namespace outval
