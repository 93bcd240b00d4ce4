#include "ss2f/csv.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ss2f::csv {

std::string format(double x) {
    char buf[40];
    const int len = std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf, static_cast<std::size_t>(len));
}

Writer::Writer(const std::filesystem::path& path)
    : out_(path, std::ios::binary), name_(path.string()) {
    if (!out_) throw std::runtime_error("cannot open " + name_ + " for writing");
}

void Writer::write_line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw std::runtime_error("write failed on " + name_);
}

void Writer::header(const std::vector<std::string>& columns) {
    if (columns_ != 0) throw std::logic_error("header already written to " + name_);
    if (columns.empty()) throw std::logic_error("empty header for " + name_);
    columns_ = columns.size();
    write_line(columns);
}

void Writer::row(const std::vector<std::string>& cells) {
    if (columns_ == 0) throw std::logic_error("row before header in " + name_);
    if (cells.size() != columns_)
        throw std::logic_error("row with " + std::to_string(cells.size()) + " fields in " +
                               name_ + ", header has " + std::to_string(columns_));
    write_line(cells);
}

void Writer::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format(v));
    row(cells);
}

double Table::number(std::size_t row, std::size_t col) const {
    if (row >= rows.size() || col >= rows[row].size())
        throw std::runtime_error(origin + ": cell (" + std::to_string(row) + ", " +
                                 std::to_string(col) + ") out of range");
    const std::string& cell = rows[row][col];
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw std::runtime_error(origin + ":" + std::to_string(row + 2) + ":" +
                                 std::to_string(col + 1) + ": malformed number '" + cell + "'");
    return value;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

Table read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");

    Table table;
    table.origin = path.string();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.peek() == std::ifstream::traits_type::eof()) break;
        auto fields = split_fields(line);
        if (line_no == 1) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size())
            throw std::runtime_error(table.origin + ":" + std::to_string(line_no) + ": row has " +
                                     std::to_string(fields.size()) + " fields, header has " +
                                     std::to_string(table.header.size()));
        table.rows.push_back(std::move(fields));
    }
    if (table.header.empty())
        throw std::runtime_error(table.origin + ": empty file, expected a header row");
    return table;
}

}  // namespace ss2f::csv
