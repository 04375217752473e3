#pragma once

// Small text helpers shared by the CSV and scenario readers/writers.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dfd::text {

std::string trim(std::string_view s);
std::string lower(std::string_view s);

/// Splits on `sep` and trims every field. An empty input yields one empty field.
std::vector<std::string> split(std::string_view s, char sep);

/// Strict number parse: the whole (trimmed) field must be consumed.
/// Throws ParseError naming `what` otherwise.
double to_double(std::string_view field, std::string_view what);
long to_long(std::string_view field, std::string_view what);

/// Blank (or "n/a") means absent.
std::optional<double> to_optional_double(std::string_view field, std::string_view what);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

/// Whole file contents; throws IoError.
std::string read_file(const std::string& path);

/// Reads a whole CSV file: rows of trimmed fields, blank lines and lines
/// starting with '#' skipped. First returned row is the header.
std::vector<std::vector<std::string>> read_csv(const std::string& path);
std::vector<std::vector<std::string>> parse_csv(std::string_view content);

}  // namespace dfd::text
