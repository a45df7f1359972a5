#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace outval
{

/// Header-keyed view of a simple comma-separated file (no quoting).
class CsvTable
{
  public:
    struct Row
    {
        std::size_t line = 0;  // 1-based line number in the source file
        std::vector<std::string> fields;
    };

    static CsvTable read(std::filesystem::path const& path);
    static CsvTable parse(std::string_view text, std::string source_name);

    std::vector<std::string> const& header() const { return header_; }
    std::vector<Row> const& rows() const { return rows_; }
    std::string const& source() const { return source_; }

    /// Index of a column; throws IngestError naming the column when absent.
    std::size_t require_column(std::string_view name) const;
    std::optional<std::size_t> find_column(std::string_view name) const;

  private:
    std::string source_;
    std::vector<std::string> header_;
    std::vector<Row> rows_;
};

std::vector<std::string> split_csv_line(std::string_view line);

double parse_double_field(std::string_view text, std::string_view source, std::size_t line,
                          std::string_view column);
long long parse_int_field(std::string_view text, std::string_view source, std::size_t line,
                          std::string_view column);
bool parse_bool_field(std::string_view text, std::string_view source, std::size_t line,
                      std::string_view column);

}  // namespace outval
