#include <doctest.h>

#include <cmath>

#include "outval/error.hpp"
#include "outval/weather.hpp"

using namespace outval;

namespace
{
Timestamp ts(char const* s) { return *parse_iso8601(s); }

WeatherSeries ramp(std::size_t n, long long dt)
{
    WeatherSeries w;
    w.start = ts("2021-02-14T00:00:00Z");
    w.dt = dt;
    for (std::size_t i = 0; i < n; ++i)
    {
        w.t_out.push_back(-10.0 + 0.01 * static_cast<double>(i));
        w.rh_out.push_back(50.0 + 0.005 * static_cast<double>(i));
    }
    return w;
}
}  // namespace

TEST_CASE("demo weather loads as 1440 steps of 300 s")
{
    auto const w = load_weather_csv(OUTVAL_DATA_DIR "/demo/weather_uri_like.csv");
    CHECK(w.size() == 1440);
    CHECK(w.dt == 300);
    CHECK_NOTHROW(check_weather(w));
    CHECK(*std::min_element(w.t_out.begin(), w.t_out.end()) < -15.0);
}

TEST_CASE("weather csv errors carry the row number")
{
    std::string const head = "timestamp,temp_c,rh_pct\n";
    CHECK_THROWS_WITH_AS(parse_weather_csv(head + "2021-01-01T00:00:00Z,1,50\n2021-01-01T00:05:00Z,1,50\n"
                                                  "2021-01-01T00:15:00Z,1,50\n",
                                           "w.csv"),
                         doctest::Contains("row 4"), IngestError);
    CHECK_THROWS_WITH_AS(parse_weather_csv(head + "2021-01-01T00:00:00Z,1,50\n2021-01-01T00:05:00Z,1,101\n", "w.csv"),
                         doctest::Contains("row 3 column 'rh_pct'"), IngestError);
    CHECK_THROWS_WITH_AS(parse_weather_csv(head + "2021-01-01T00:00:00Z,1,50\nnot-a-time,1,50\n", "w.csv"),
                         doctest::Contains("row 3"), IngestError);
    // One second of jitter is tolerated.
    auto const w = parse_weather_csv(head + "2021-01-01T00:00:00Z,1,50\n2021-01-01T00:05:00Z,2,50\n"
                                            "2021-01-01T00:10:01Z,3,50\n",
                                     "w.csv");
    CHECK(w.size() == 3);
    CHECK(weather_to_csv(w).find("2021-01-01T00:10:00Z,3,50") != std::string::npos);
}

TEST_CASE("slice_window")
{
    auto const w = ramp(1440, 300);
    CHECK(slice_window(w, w.start, w.end()) == w);

    CHECK_THROWS_AS(slice_window(w, w.start, w.start), RangeError);
    CHECK_THROWS_AS(slice_window(w, w.start + std::chrono::seconds(10), w.end()), RangeError);
    CHECK_THROWS_AS(slice_window(w, w.start - std::chrono::hours(1), w.end()), RangeError);
    CHECK_THROWS_AS(slice_window(w, w.start, w.end() + std::chrono::hours(1)), RangeError);

    auto const mid = slice_window(w, w.start + std::chrono::hours(48), w.start + std::chrono::hours(72));
    CHECK(mid.size() == 288);
    CHECK(mid.t_out.front() == w.t_out[576]);
    CHECK(mid.start == w.time_at(576));

    // slice of a slice equals one slice with the intersected bounds
    auto const outer = slice_window(w, w.start + std::chrono::hours(10), w.start + std::chrono::hours(100));
    auto const inner = slice_window(outer, w.start + std::chrono::hours(20), w.start + std::chrono::hours(50));
    CHECK(inner == slice_window(w, w.start + std::chrono::hours(20), w.start + std::chrono::hours(50)));
}

TEST_CASE("resample")
{
    auto const w = ramp(289, 300);
    CHECK(resample(w, 300) == w);
    CHECK_THROWS_AS(resample(w, 700), RangeError);
    CHECK_THROWS_AS(resample(w, 0), RangeError);

    WeatherSeries c = w;
    std::fill(c.t_out.begin(), c.t_out.end(), 4.5);
    auto const fine_c = resample(c, 150);
    CHECK(fine_c.size() == 2 * c.size() - 1);
    for (double t : fine_c.t_out)
    {
        CHECK(t == 4.5);
    }

    auto const fine = resample(w, 60);
    CHECK(fine.size() == (w.size() - 1) * 5 + 1);
    CHECK(fine.t_out.back() == w.t_out.back());
    auto const back = resample(fine, 300);
    REQUIRE(back.size() == w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
    {
        CHECK(std::abs(back.t_out[i] - w.t_out[i]) < 1e-12);
        CHECK(std::abs(back.rh_out[i] - w.rh_out[i]) < 1e-12);
    }

    // min/max of a monotone series survive both directions
    auto const coarse = resample(w, 3600);
    CHECK(coarse.t_out.front() == w.t_out.front());
    CHECK(coarse.t_out.back() == w.t_out.back());
    CHECK(*std::max_element(fine.t_out.begin(), fine.t_out.end()) == w.t_out.back());
}
