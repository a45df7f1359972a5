#include "outval/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "outval/error.hpp"

namespace outval
{

namespace
{
std::string_view trim(std::string_view s)
{
    auto const not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
    auto const b = std::find_if(s.begin(), s.end(), not_space);
    auto const e = std::find_if(s.rbegin(), s.rend(), not_space).base();
    return b < e ? std::string_view(&*b, static_cast<std::size_t>(e - b)) : std::string_view{};
}

[[noreturn]] void bad_field(std::string_view source, std::size_t line, std::string_view column,
                            std::string_view text, std::string_view what)
{
    throw IngestError(fmt::format("{}: row {} column '{}': {} '{}'", source, line, column, what, text));
}
}  // namespace

std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        auto const comma = line.find(',', start);
        auto const piece = line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                               : comma - start);
        out.emplace_back(trim(piece));
        if (comma == std::string_view::npos)
        {
            break;
        }
        start = comma + 1;
    }
    return out;
}

CsvTable CsvTable::read(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw IngestError(fmt::format("cannot open '{}'", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

CsvTable CsvTable::parse(std::string_view text, std::string source_name)
{
    CsvTable t;
    t.source_ = std::move(source_name);
    if (text.starts_with("\xEF\xBB\xBF"))
    {
        text.remove_prefix(3);
    }
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool have_header = false;
    while (pos <= text.size())
    {
        auto const nl = text.find('\n', pos);
        auto const raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        auto const line = trim(raw);
        if (line.empty())
        {
            continue;
        }
        auto fields = split_csv_line(line);
        if (!have_header)
        {
            t.header_ = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.header_.size())
        {
            throw IngestError(fmt::format("{}: row {} has {} fields, header has {}", t.source_, line_no,
                                          fields.size(), t.header_.size()));
        }
        t.rows_.push_back(Row{line_no, std::move(fields)});
    }
    if (!have_header)
    {
        throw IngestError(fmt::format("{}: missing header row", t.source_));
    }
    return t;
}

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const
{
    auto const it = std::find(header_.begin(), header_.end(), name);
    if (it == header_.end())
    {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - header_.begin());
}

std::size_t CsvTable::require_column(std::string_view name) const
{
    auto const idx = find_column(name);
    if (!idx)
    {
        throw IngestError(fmt::format("{}: missing column '{}'", source_, name));
    }
    return *idx;
}

double parse_double_field(std::string_view text, std::string_view source, std::size_t line,
                          std::string_view column)
{
    double v = 0.0;
    auto const* end = text.data() + text.size();
    auto const [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v))
    {
        bad_field(source, line, column, text, "unparsable number");
    }
    return v;
}

long long parse_int_field(std::string_view text, std::string_view source, std::size_t line,
                          std::string_view column)
{
    long long v = 0;
    auto const* end = text.data() + text.size();
    auto const [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end)
    {
        bad_field(source, line, column, text, "unparsable integer");
    }
    return v;
}

bool parse_bool_field(std::string_view text, std::string_view source, std::size_t line,
                      std::string_view column)
{
    if (text == "1" || text == "true")
    {
        return true;
    }
    if (text == "0" || text == "false")
    {
        return false;
    }
    bad_field(source, line, column, text, "unparsable boolean");
}

}  // namespace outval
