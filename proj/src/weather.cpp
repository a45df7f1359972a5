#include "outval/weather.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "outval/csv.hpp"
#include "outval/error.hpp"

namespace outval
{

void check_weather(WeatherSeries const& w)
{
    if (w.dt <= 0)
    {
        throw RangeError(fmt::format("weather: dt must be positive (got {})", w.dt));
    }
    if (w.t_out.size() != w.rh_out.size())
    {
        throw RangeError("weather: temperature and humidity lengths differ");
    }
    if (w.t_out.size() < 2)
    {
        throw RangeError("weather: at least two samples are required");
    }
    for (std::size_t i = 0; i < w.size(); ++i)
    {
        if (!std::isfinite(w.t_out[i]) || !(w.rh_out[i] >= 0.0 && w.rh_out[i] <= 100.0))
        {
            throw RangeError(fmt::format("weather: sample {} out of range", i));
        }
    }
}

WeatherSeries parse_weather_csv(std::string_view text, std::string const& source_name)
{
    auto const table = CsvTable::parse(text, source_name);
    std::size_t const c_ts = table.require_column("timestamp");
    std::size_t const c_t = table.require_column("temp_c");
    std::size_t const c_rh = table.require_column("rh_pct");
    auto const& rows = table.rows();
    if (rows.size() < 2)
    {
        throw IngestError(fmt::format("{}: at least two rows are required", source_name));
    }

    WeatherSeries w;
    w.t_out.reserve(rows.size());
    w.rh_out.reserve(rows.size());
    Timestamp prev{};
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        auto const& row = rows[i];
        auto ts = parse_iso8601(row.fields[c_ts]);
        if (!ts)
        {
            throw IngestError(fmt::format("{}: row {} column 'timestamp': unparsable timestamp '{}'", source_name,
                                          row.line, row.fields[c_ts]));
        }
        if (i == 0)
        {
            w.start = *ts;
        }
        else
        {
            long long const gap = (*ts - prev).count();
            if (i == 1)
            {
                if (gap <= 0)
                {
                    throw IngestError(fmt::format("{}: row {}: timestamps must be strictly increasing",
                                                  source_name, row.line));
                }
                w.dt = gap;
            }
            long long const expected_offset = w.dt * static_cast<long long>(i);
            if (std::llabs((*ts - w.start).count() - expected_offset) > 1)
            {
                throw IngestError(fmt::format("{}: row {}: non-uniform spacing ({} s, expected {} s)", source_name,
                                              row.line, gap, w.dt));
            }
        }
        prev = *ts;
        double const t = parse_double_field(row.fields[c_t], source_name, row.line, "temp_c");
        double const rh = parse_double_field(row.fields[c_rh], source_name, row.line, "rh_pct");
        if (!(rh >= 0.0 && rh <= 100.0))
        {
            throw IngestError(
                fmt::format("{}: row {} column 'rh_pct': {} outside [0,100]", source_name, row.line, rh));
        }
        w.t_out.push_back(t);
        w.rh_out.push_back(rh);
    }
    return w;
}

WeatherSeries load_weather_csv(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw IngestError(fmt::format("cannot open weather file '{}'", path.string()));
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_weather_csv(text, path.string());
}

std::string weather_to_csv(WeatherSeries const& w)
{
    std::string out = "timestamp,temp_c,rh_pct\n";
    for (std::size_t i = 0; i < w.size(); ++i)
    {
        out += fmt::format("{},{},{}\n", format_iso8601(w.time_at(i)), w.t_out[i], w.rh_out[i]);
    }
    return out;
}

WeatherSeries slice_window(WeatherSeries const& w, Timestamp start, Timestamp end)
{
    long long const off_start = (start - w.start).count();
    long long const off_end = (end - w.start).count();
    if (off_start % w.dt != 0 || off_end % w.dt != 0)
    {
        throw RangeError(fmt::format("weather: window [{}, {}) is not aligned to the {} s grid",
                                     format_iso8601(start), format_iso8601(end), w.dt));
    }
    if (off_start < 0 || off_end > (w.end() - w.start).count() || off_end < off_start)
    {
        throw RangeError(fmt::format("weather: window [{}, {}) lies outside the series span [{}, {})",
                                     format_iso8601(start), format_iso8601(end), format_iso8601(w.start),
                                     format_iso8601(w.end())));
    }
    auto const i0 = static_cast<std::size_t>(off_start / w.dt);
    auto const i1 = static_cast<std::size_t>(off_end / w.dt);
    if (i1 - i0 < 2)
    {
        throw RangeError("weather: window must contain at least two samples");
    }
    WeatherSeries out;
    out.start = start;
    out.dt = w.dt;
    out.t_out.assign(w.t_out.begin() + static_cast<std::ptrdiff_t>(i0),
                     w.t_out.begin() + static_cast<std::ptrdiff_t>(i1));
    out.rh_out.assign(w.rh_out.begin() + static_cast<std::ptrdiff_t>(i0),
                      w.rh_out.begin() + static_cast<std::ptrdiff_t>(i1));
    return out;
}

WeatherSeries resample(WeatherSeries const& w, long long new_dt)
{
    if (new_dt <= 0)
    {
        throw RangeError(fmt::format("weather: resample step must be positive (got {})", new_dt));
    }
    if (new_dt == w.dt)
    {
        return w;
    }
    WeatherSeries out;
    out.start = w.start;
    out.dt = new_dt;
    if (new_dt < w.dt)
    {
        if (w.dt % new_dt != 0)
        {
            throw RangeError(fmt::format("weather: {} s does not divide {} s", new_dt, w.dt));
        }
        std::size_t const m = static_cast<std::size_t>(w.dt / new_dt);
        std::size_t const n = (w.size() - 1) * m + 1;
        out.t_out.resize(n);
        out.rh_out.resize(n);
        for (std::size_t j = 0; j < n; ++j)
        {
            std::size_t const i = j / m;
            std::size_t const r = j % m;
            if (r == 0)
            {
                out.t_out[j] = w.t_out[i];
                out.rh_out[j] = w.rh_out[i];
                continue;
            }
            double const f = static_cast<double>(r) / static_cast<double>(m);
            out.t_out[j] = w.t_out[i] + f * (w.t_out[i + 1] - w.t_out[i]);
            out.rh_out[j] = w.rh_out[i] + f * (w.rh_out[i + 1] - w.rh_out[i]);
        }
        return out;
    }
    if (new_dt % w.dt != 0)
    {
        throw RangeError(fmt::format("weather: {} s is not a multiple of {} s", new_dt, w.dt));
    }
    std::size_t const m = static_cast<std::size_t>(new_dt / w.dt);
    for (std::size_t i = 0; i < w.size(); i += m)
    {
        out.t_out.push_back(w.t_out[i]);
        out.rh_out.push_back(w.rh_out[i]);
    }
    if (out.size() < 2)
    {
        throw RangeError("weather: resampled series would have fewer than two samples");
    }
    return out;
}

}  // namespace outval
