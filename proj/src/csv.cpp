#include "afc/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace afc {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void Table::add_column(std::string name, std::vector<double> values) {
    if (!columns.empty() && values.size() != columns[0].size())
        throw std::invalid_argument("Table: column '" + name +
                                    "' has mismatched length");
    names.push_back(std::move(name));
    columns.push_back(std::move(values));
}

const std::vector<double>& Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return columns[i];
    throw std::invalid_argument("Table: no column named '" + name + "'");
}

void Table::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t i = 0; i < names.size(); ++i)
        out << (i ? "," : "") << names[i];
    out << "\n";
    for (std::size_t r = 0; r < rows(); ++r) {
        for (std::size_t c = 0; c < cols(); ++c)
            out << (c ? "," : "") << format_double(columns[c][r]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Table Table::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    Table t;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty csv: " + path);
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) {
        t.names.push_back(cell);
        t.columns.emplace_back();
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream row(line);
        std::size_t c = 0;
        while (std::getline(row, cell, ',')) {
            if (c >= t.cols())
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": too many fields");
            std::size_t pos = 0;
            double v = std::stod(cell, &pos);
            if (pos != cell.size())
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": bad number '" + cell + "'");
            t.columns[c++].push_back(v);
        }
        if (c != t.cols())
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": too few fields");
    }
    return t;
}

}  // namespace afc
