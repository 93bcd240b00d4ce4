#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace ss2f::csv {

/// Formats a double with 17 significant digits so that parse -> format ->
/// parse is the identity.
std::string format(double x);

/// Comma-separated writer: header row then data rows, dot decimal, UTF-8,
/// '\n' line endings.
class Writer {
public:
    explicit Writer(const std::filesystem::path& path);

    void header(const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    std::string name_;
    std::size_t columns_ = 0;
    void write_line(const std::vector<std::string>& cells);
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Cell (row, col) parsed as a double; throws std::runtime_error with
    /// "file:row:col" context on malformed numbers. Row is 0-based over
    /// data rows.
    double number(std::size_t row, std::size_t col) const;

    std::string origin;  // file name, used in error messages
};

/// Reads a whole CSV file. Every data row must have the same number of
/// fields as the header; violations are reported with the 1-based file line
/// number.
Table read(const std::filesystem::path& path);

}  // namespace ss2f::csv
