#include "cursor_sim/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace csim {

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw OutputError(name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                          std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

std::string format_cell(const Cell& c) {
    if (const double* d = std::get_if<double>(&c)) {
        if (std::isnan(*d)) return "nan";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", *d == 0.0 ? 0.0 : *d);  // no "-0"
        return buf;
    }
    if (const long long* i = std::get_if<long long>(&c)) return std::to_string(*i);
    const std::string& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") != std::string::npos) throw OutputError("CSV cell needs quoting: '" + s + "'");
    return s;
}

std::string to_csv(const Table& t) {
    if (t.columns.empty() || t.rows.empty()) throw OutputError("refusing to write empty table '" + t.name + "'");
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ",";
            out += format_cell(r[i]);
        }
        out += "\n";
    }
    return out;
}

namespace {

void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw OutputError("cannot write '" + path + "'");
    f << body;
    if (!f) throw OutputError("write failed for '" + path + "'");
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

void write_csv(const Table& t, const std::string& path) { write_file(path, to_csv(t)); }

std::size_t CsvData::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw OutputError("no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

double CsvData::number(std::size_t row, std::size_t col) const {
    const std::string& s = rows.at(row).at(col);
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw OutputError("not a number: '" + s + "'");
    return v;
}

CsvData read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw OutputError("cannot read '" + path + "'");
    CsvData d;
    std::string line;
    if (!std::getline(f, line)) throw OutputError("empty CSV '" + path + "'");
    d.columns = split_line(line);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto r = split_line(line);
        if (r.size() != d.columns.size()) throw OutputError("ragged row in '" + path + "'");
        d.rows.push_back(std::move(r));
    }
    return d;
}

std::string to_svg(const Table& t, const std::string& x, const std::vector<std::string>& ys) {
    auto col = [&](const std::string& n) {
        const auto it = std::find(t.columns.begin(), t.columns.end(), n);
        if (it == t.columns.end()) throw OutputError(t.name + ": no column '" + n + "'");
        return static_cast<std::size_t>(it - t.columns.begin());
    };
    auto val = [](const Cell& c) {
        if (const double* d = std::get_if<double>(&c)) return *d;
        if (const long long* i = std::get_if<long long>(&c)) return double(*i);
        throw OutputError("non-numeric column in plot");
    };
    if (t.rows.empty()) throw OutputError("refusing to plot empty table '" + t.name + "'");
    const std::size_t xi = col(x);
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& r : t.rows) {
        x0 = std::min(x0, val(r[xi]));
        x1 = std::max(x1, val(r[xi]));
        for (const auto& y : ys) {
            const double v = val(r[col(y)]);
            if (std::isfinite(v)) y0 = std::min(y0, v), y1 = std::max(y1, v);
        }
    }
    if (x1 <= x0) x1 = x0 + 1;
    if (y1 <= y0) y1 = y0 + 1;
    const double W = 640, H = 400, m = 40;
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect x=\"" << m << "\" y=\"" << m / 2 << "\" width=\"" << W - 1.5 * m << "\" height=\"" << H - 1.5 * m
       << "\" fill=\"none\" stroke=\"#888\"/>\n";
    os.precision(6);
    for (std::size_t k = 0; k < ys.size(); ++k) {
        const std::size_t yi = col(ys[k]);
        os << "<polyline fill=\"none\" stroke=\"" << colors[k % 6] << "\" points=\"";
        for (const auto& r : t.rows) {
            const double v = val(r[yi]);
            if (!std::isfinite(v)) continue;
            const double px = m + (val(r[xi]) - x0) / (x1 - x0) * (W - 1.5 * m);
            const double py = H - m - (v - y0) / (y1 - y0) * (H - 1.5 * m);
            os << px << "," << py << " ";
        }
        os << "\"/>\n";
        os << "<text x=\"" << W - 1.5 * m << "\" y=\"" << m / 2 + 14 * (k + 1) << "\" font-size=\"11\" fill=\""
           << colors[k % 6] << "\" text-anchor=\"end\">" << ys[k] << "</text>\n";
    }
    os << "<text x=\"" << m << "\" y=\"" << H - 8 << "\" font-size=\"11\">" << x << " [" << x0 << ", " << x1
       << "]</text>\n";
    os << "</svg>\n";
    return os.str();
}

void write_svg(const Table& t, const std::string& x, const std::vector<std::string>& ys, const std::string& path) {
    write_file(path, to_svg(t, x, ys));
}

}  // namespace csim
