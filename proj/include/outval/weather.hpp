#pragma once

// Outdoor weather series driving the thermal model and the Winter Index.

#include <filesystem>
#include <string>
#include <vector>

#include "outval/timeutil.hpp"

namespace outval
{

/// Uniformly spaced samples; sample i is at start + i*dt.
struct WeatherSeries
{
    Timestamp start{};
    long long dt = 0;  // seconds
    std::vector<double> t_out;   // degC
    std::vector<double> rh_out;  // %

    std::size_t size() const { return t_out.size(); }
    Timestamp time_at(std::size_t i) const { return start + std::chrono::seconds(dt * static_cast<long long>(i)); }
    /// One past the last sample: start + size()*dt.
    Timestamp end() const { return time_at(size()); }

    friend bool operator==(WeatherSeries const&, WeatherSeries const&) = default;
};

/// Throws RangeError if the series breaks its invariants.
void check_weather(WeatherSeries const& w);

/// Reads `timestamp,temp_c,rh_pct`. Throws IngestError with the row number on
/// bad timestamps, non-uniform spacing (more than 1 s jitter) or rh outside [0,100].
WeatherSeries load_weather_csv(std::filesystem::path const& path);
WeatherSeries parse_weather_csv(std::string_view text, std::string const& source_name);
std::string weather_to_csv(WeatherSeries const& w);

/// Samples in the half-open window [start, end). Bounds must sit on the dt grid
/// inside the series span and enclose at least two samples.
WeatherSeries slice_window(WeatherSeries const& w, Timestamp start, Timestamp end);

/// Linear interpolation onto a finer grid, stride selection onto a coarser one.
/// new_dt must divide or be a multiple of dt.
WeatherSeries resample(WeatherSeries const& w, long long new_dt);

}  // namespace outval
