#include "outval/timeutil.hpp"

#include <cctype>
#include <charconv>

#include <fmt/format.h>

namespace outval
{

namespace
{
bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out)
{
    if (pos + len > s.size())
    {
        return false;
    }
    for (std::size_t i = pos; i < pos + len; ++i)
    {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
        {
            return false;
        }
    }
    auto const* first = s.data() + pos;
    return std::from_chars(first, first + len, out).ec == std::errc{};
}
}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view s)
{
    using namespace std::chrono;
    int y, mo, d, h, mi, sec;
    if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ')
        || s[13] != ':' || s[16] != ':')
    {
        return std::nullopt;
    }
    if (!read_int(s, 0, 4, y) || !read_int(s, 5, 2, mo) || !read_int(s, 8, 2, d)
        || !read_int(s, 11, 2, h) || !read_int(s, 14, 2, mi) || !read_int(s, 17, 2, sec))
    {
        return std::nullopt;
    }
    year_month_day const ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || sec > 59)
    {
        return std::nullopt;
    }
    int offset_min = 0;
    auto rest = s.substr(19);
    if (rest == "Z" || rest.empty())
    {
    }
    else if (rest.size() == 6 && (rest[0] == '+' || rest[0] == '-') && rest[3] == ':')
    {
        int oh, om;
        if (!read_int(rest, 1, 2, oh) || !read_int(rest, 4, 2, om))
        {
            return std::nullopt;
        }
        offset_min = (rest[0] == '-' ? -1 : 1) * (oh * 60 + om);
    }
    else
    {
        return std::nullopt;
    }
    auto const tp = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} - minutes{offset_min};
    return time_point_cast<seconds>(tp);
}

std::string format_iso8601(Timestamp t)
{
    using namespace std::chrono;
    auto const dp = floor<days>(t);
    year_month_day const ymd{dp};
    hh_mm_ss const hms{t - dp};
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                       hms.hours().count(), hms.minutes().count(), hms.seconds().count());
}

int local_hour(Timestamp t, int utc_offset_hours)
{
    using namespace std::chrono;
    auto const shifted = t + hours{utc_offset_hours};
    auto const since_midnight = shifted - floor<days>(shifted);
    return static_cast<int>(duration_cast<hours>(since_midnight).count());
}

}  // namespace outval
