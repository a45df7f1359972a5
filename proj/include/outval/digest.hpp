#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace outval
{

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);
/// Lower-case hex SHA-256 of a file's contents; throws IngestError if unreadable.
std::string sha256_file(std::filesystem::path const& path);

}  // namespace outval
