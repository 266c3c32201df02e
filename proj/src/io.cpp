#include "pcrit/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pcrit::io {

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    fail(ErrorCode::Parse, path + ": missing column '" + std::string(name) + "'");
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    require(bool(in), ErrorCode::Io, "cannot open '" + path + "'");
    CsvTable table;
    table.path = path;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty()) continue;
        if (text[0] == '#') {
            table.comments.push_back(trim(std::string_view(text).substr(1)));
            continue;
        }
        auto fields = split(text, ',');
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        require(fields.size() == table.header.size(), ErrorCode::Parse,
                path + ":" + std::to_string(line_no) + ": expected " + std::to_string(table.header.size()) +
                    " fields, found " + std::to_string(fields.size()));
        table.rows.push_back(std::move(fields));
    }
    require(!table.header.empty(), ErrorCode::Parse, path + ": missing header line");
    return table;
}

double parse_double(std::string_view text, const std::string& context) {
    const std::string s(text);
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(s.c_str(), &end);
    require(!s.empty() && end == s.c_str() + s.size() && errno != ERANGE, ErrorCode::Parse,
            context + ": '" + s + "' is not a number");
    return value;
}

std::uint64_t parse_uint(std::string_view text, const std::string& context) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    require(ec == std::errc() && ptr == text.data() + text.size() && !text.empty(), ErrorCode::Parse,
            context + ": '" + std::string(text) + "' is not a nonnegative integer");
    return value;
}

std::size_t parse_index(std::string_view text, const std::string& context) {
    return static_cast<std::size_t>(parse_uint(text, context));
}

std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    return buffer;
}

void write_file(const std::string& path, const std::string& contents) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    require(bool(out), ErrorCode::Io, "cannot write '" + path + "'");
    out << contents;
    out.close();
    require(bool(out), ErrorCode::Io, "failed writing '" + path + "'");
}

} // namespace pcrit::io
