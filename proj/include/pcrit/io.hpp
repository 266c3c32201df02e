#pragma once

#include "pcrit/error.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pcrit::io {

/// One parsed CSV file: header names, data rows, and '#'-prefixed comment lines.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> comments;
    std::string path;

    /// Column position by name; throws Parse when missing.
    std::size_t column(std::string_view name) const;
};

/// Reads a comma-separated file whose first non-comment line is the header.
CsvTable read_csv(const std::string& path);

double parse_double(std::string_view text, const std::string& context);
std::size_t parse_index(std::string_view text, const std::string& context);
std::uint64_t parse_uint(std::string_view text, const std::string& context);

/// Shortest form that reads back to the same double.
std::string format_double(double x);

std::string trim(std::string_view text);
std::vector<std::string> split(std::string_view text, char sep);

/// Writes text to a file, creating parent directories; throws Io on failure.
void write_file(const std::string& path, const std::string& contents);

} // namespace pcrit::io
