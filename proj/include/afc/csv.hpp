#pragma once

#include <string>
#include <vector>

namespace afc {

// Column-major numeric table. Doubles are written with 17 significant
// digits so a save/load round trip is bit-exact.
struct Table {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }
    std::size_t cols() const { return columns.size(); }

    void add_column(std::string name, std::vector<double> values);
    const std::vector<double>& column(const std::string& name) const;

    void save(const std::string& path) const;
    static Table load(const std::string& path);
};

std::string format_double(double v);

}  // namespace afc
