#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace jcmss {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Parses a full string as a double; throws ParseError otherwise.
double parse_double(std::string_view text);

/// Writes `contents` to a temporary sibling of `path`, then renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace jcmss
