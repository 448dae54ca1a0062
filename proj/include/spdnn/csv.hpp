#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace spdnn {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// Splits one CSV line on commas. No quoting support; fields are trimmed of
/// surrounding whitespace and a trailing '\r'.
std::vector<std::string> split_csv_line(std::string_view line);

/// Parses a whole field as a double. Returns false on any trailing garbage.
bool parse_double(std::string_view field, double& out);

}  // namespace spdnn
