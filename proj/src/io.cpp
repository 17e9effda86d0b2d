#include "fwpoly/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace fwpoly {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string strip_comment(const std::string& line) {
    const size_t pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string trim(const std::string& s) {
    const size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

PointSet read_vertex_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open vertex file '" + path + "'", 0);
    std::vector<Vec> pts;
    int dim = -1;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        std::istringstream ls(body);
        Vec p;
        double v;
        while (ls >> v) p.push_back(v);
        if (!ls.eof()) throw ParseError("malformed number in vertex file", line_no);
        if (p.empty()) continue;
        if (dim < 0) dim = static_cast<int>(p.size());
        if (static_cast<int>(p.size()) != dim)
            throw ParseError("expected " + std::to_string(dim) + " coordinates, got " +
                                 std::to_string(p.size()),
                             line_no);
        pts.push_back(std::move(p));
    }
    if (pts.empty()) throw ParseError("vertex file contains no points", line_no);
    try {
        return PointSet(dim, std::move(pts));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 0);
    }
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        const size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key=value", line_no);
        const std::string key = trim(body.substr(0, eq));
        const std::string val = trim(body.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line_no);
        kv[key] = val;
    }
    return kv;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'", 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open csv file '" + path + "'", 0);
    CsvTable t;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.comments.push_back(line.substr(1).empty() ? "" : trim(line.substr(1)));
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        if (!have_header) {
            for (std::string& c : cells) c = trim(c);
            t.header = cells;
            have_header = true;
            continue;
        }
        if (cells.size() != t.header.size())
            throw ParseError("row has " + std::to_string(cells.size()) + " cells, header has " +
                                 std::to_string(t.header.size()),
                             line_no);
        std::vector<double> row;
        for (const std::string& c : cells) {
            const std::string v = trim(c);
            if (v.empty()) {
                row.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            try {
                size_t used = 0;
                row.push_back(std::stod(v, &used));
                if (used != v.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ParseError("malformed number '" + v + "'", line_no);
            }
        }
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw ParseError("csv file has no header row", line_no);
    return t;
}

void write_csv_file(const std::string& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv file '" + path + "'");
    for (const std::string& c : table.comments) out << "# " << c << "\n";
    for (size_t i = 0; i < table.header.size(); ++i)
        out << (i ? "," : "") << table.header[i];
    out << "\n";
    for (const std::vector<double>& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "");
            if (!std::isnan(row[i])) out << format_double(row[i]);
        }
        out << "\n";
    }
}

}  // namespace fwpoly
