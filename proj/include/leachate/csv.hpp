#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace leachate {

// Minimal CSV support: header row required, configurable single-char
// delimiter, no quoting. Matches the simple telemetry exports this
// toolkit consumes and produces.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column_index(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline std::vector<std::string> split_csv_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == delim) {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    out.push_back(field);
    return out;
}

inline CsvTable read_csv(std::istream& in, char delim = ',') {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv: empty input, header row required");
    table.header = split_csv_line(line, delim);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_csv_line(line, delim);
        if (fields.size() != table.header.size())
            throw std::runtime_error("csv: line " + std::to_string(lineno) + ": expected " +
                                     std::to_string(table.header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        table.rows.push_back(std::move(fields));
    }
    return table;
}

inline CsvTable read_csv_file(const std::string& path, char delim = ',') {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return read_csv(in, delim);
}

inline void write_csv(std::ostream& out, const CsvTable& table, char delim = ',') {
    auto write_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << delim;
            out << row[i];
        }
        out << '\n';
    };
    write_row(table.header);
    for (const auto& row : table.rows) write_row(row);
}

inline void write_csv_file(const std::string& path, const CsvTable& table, char delim = ',') {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    write_csv(out, table, delim);
}

// Shortest decimal representation that round-trips a double.
inline std::string format_double(double v) {
    char buf[32];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::stod(buf) == v) return buf;
    }
    return buf;
}

}  // namespace leachate
