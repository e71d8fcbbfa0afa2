#include "gsaal/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "gsaal/errors.hpp"

namespace gsaal {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const Matrix& values, const std::vector<int>* labels) {
    if (labels != nullptr && labels->size() != values.rows) {
        throw ShapeError("write_csv: label count does not match row count");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_csv: cannot open " + path);

    std::ostringstream buf;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (j > 0) buf << ',';
        buf << columns[j];
    }
    if (labels != nullptr) buf << ",label";
    buf << '\n';
    for (std::size_t i = 0; i < values.rows; ++i) {
        for (std::size_t j = 0; j < values.cols; ++j) {
            if (j > 0) buf << ',';
            buf << format_double(values(i, j));
        }
        if (labels != nullptr) buf << ',' << (*labels)[i];
        buf << '\n';
    }
    out << buf.str();
    if (!out) throw IoError("write_csv: failed writing " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_csv: cannot open " + path);

    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("read_csv: " + path + " has no header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        header.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    table.has_labels = !header.empty() && header.back() == "label";
    const std::size_t value_cols = header.size() - (table.has_labels ? 1 : 0);
    table.columns.assign(header.begin(), header.begin() + static_cast<std::ptrdiff_t>(value_cols));

    std::vector<double> values;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t col = 0;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            const std::size_t end = comma == std::string::npos ? line.size() : comma;
            const char* first = line.data() + pos;
            const char* last = line.data() + end;
            if (col >= header.size()) {
                throw ParseError("read_csv: row " + std::to_string(line_no) +
                                 " has more fields than the header");
            }
            if (table.has_labels && col == header.size() - 1) {
                int label = 0;
                auto [p, ec] = std::from_chars(first, last, label);
                if (ec != std::errc() || p != last) {
                    throw ParseError("read_csv: row " + std::to_string(line_no) + ", column " +
                                     std::to_string(col + 1) + ": bad label '" +
                                     std::string(first, last) + "'");
                }
                table.labels.push_back(label);
            } else {
                double v = 0.0;
                auto [p, ec] = std::from_chars(first, last, v);
                if (ec != std::errc() || p != last) {
                    throw ParseError("read_csv: row " + std::to_string(line_no) + ", column " +
                                     std::to_string(col + 1) + ": bad number '" +
                                     std::string(first, last) + "'");
                }
                values.push_back(v);
            }
            ++col;
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (col != header.size()) {
            throw ParseError("read_csv: row " + std::to_string(line_no) + " has " +
                             std::to_string(col) + " fields, header has " +
                             std::to_string(header.size()));
        }
        ++rows;
    }
    table.values.rows = rows;
    table.values.cols = value_cols;
    table.values.data = std::move(values);
    return table;
}

}  // namespace gsaal
