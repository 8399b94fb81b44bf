#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace csim {

struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::string name;  // file name, e.g. "amplitudes.csv"
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

std::string format_cell(const Cell& c);  // doubles as %.12g
std::string to_csv(const Table& t);
void write_csv(const Table& t, const std::string& path);

struct CsvData {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, std::size_t col) const;
};
CsvData read_csv(const std::string& path);

// Line plot of the y columns against column x; numeric columns only.
std::string to_svg(const Table& t, const std::string& x, const std::vector<std::string>& ys);
void write_svg(const Table& t, const std::string& x, const std::vector<std::string>& ys, const std::string& path);

}  // namespace csim
