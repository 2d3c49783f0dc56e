#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qrobust {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Parses a double, throwing ConfigError mentioning `what` on failure.
double parse_double(std::string_view text, std::string_view what);

std::vector<std::string> split_csv_line(std::string_view line);

/// Writes `contents` to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path &path, std::string_view contents);
std::string read_text_file(const std::filesystem::path &path);

} // namespace qrobust
