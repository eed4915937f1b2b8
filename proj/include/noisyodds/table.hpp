#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace noisyodds {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Column-named rows, written as CSV with doubles at 17 significant digits.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
    void write_csv(std::ostream& out) const;
};

/// "%.17g" formatting used for every float the tools emit.
std::string format_double(double v);

}  // namespace noisyodds
