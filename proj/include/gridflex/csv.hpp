#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gridflex::csv {

struct Row {
  std::size_t line = 0;  // 1-based line number in the source
  std::vector<std::string> fields;
};

/// Reads comma-separated rows (RFC 4180 quoting, no embedded newlines).
/// Blank lines and lines starting with '#' are skipped.
[[nodiscard]] std::vector<Row> read_rows(std::istream& in);

[[nodiscard]] std::vector<std::string> split_line(std::string_view line);

/// Strict number parse: whole field must be consumed. Empty → nullopt.
[[nodiscard]] std::optional<double> parse_double(std::string_view field);

/// Shortest representation that round-trips exactly.
[[nodiscard]] std::string format_double(double value);

[[nodiscard]] std::string trim(std::string_view s);

}  // namespace gridflex::csv
