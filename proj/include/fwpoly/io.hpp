#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fwpoly/geometry.hpp"

namespace fwpoly {

// Input error carrying the 1-based line number that caused it.
struct ParseError : std::runtime_error {
    int line = 0;
    ParseError(const std::string& what, int line_no)
        : std::runtime_error(what + " (line " + std::to_string(line_no) + ")"),
          line(line_no) {}
};

// Shortest round-trippable decimal representation (%.17g).
std::string format_double(double x);

// Vertex file: one point per line, whitespace-separated decimal floats,
// '#' starts a comment, blank lines skipped; dimension inferred from the
// first data line.
PointSet read_vertex_file(const std::string& path);

// Flat key=value config, one pair per line, '#' comments allowed.
std::map<std::string, std::string> read_config_file(const std::string& path);
std::map<std::string, std::string> parse_config_text(const std::string& text);

// CSV with '#' comment lines before the header row.
struct CsvTable {
    std::vector<std::string> comments;  // without the leading '#'
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
CsvTable read_csv_file(const std::string& path);
void write_csv_file(const std::string& path, const CsvTable& table);

}  // namespace fwpoly
