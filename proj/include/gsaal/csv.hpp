#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsaal/matrix.hpp"

namespace gsaal {

/// Parsed CSV content. When the last column of a file is named "label" it is
/// split off into labels; every other column must be numeric.
struct CsvTable {
    std::vector<std::string> columns;
    Matrix values;
    std::vector<int> labels;
    bool has_labels = false;
};

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

/// Comma separated, header row, '.' decimal separator, LF line endings.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const Matrix& values, const std::vector<int>* labels = nullptr);

CsvTable read_csv(const std::string& path);

}  // namespace gsaal
