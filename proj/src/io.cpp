#include "fsacf/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace fsacf::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

double parse_field(std::string_view field, long row, long column) {
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (field.empty() || ec != std::errc() || ptr != last) {
        throw CsvError("cannot parse number '" + std::string(field) + "' at row " + std::to_string(row) +
                           ", column " + std::to_string(column),
                       row, column);
    }
    if (!std::isfinite(value)) {
        throw CsvError("non-finite value at row " + std::to_string(row) + ", column " + std::to_string(column), row,
                       column);
    }
    return value;
}

}  // namespace

FunctionalSeries read_curves(std::istream& in) {
    std::string line;
    long row = 0;
    std::vector<double> points;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++row;
        const auto view = trim(line);
        if (view.empty()) continue;
        const auto fields = split(view);
        if (points.empty()) {
            if (fields.front() != "t") throw CsvError("header must start with 't'", row, 1);
            if (fields.size() < 3) throw CsvError("header needs at least 2 grid points", row, 1);
            for (std::size_t c = 1; c < fields.size(); ++c) points.push_back(parse_field(fields[c], row, static_cast<long>(c + 1)));
            continue;
        }
        if (fields.size() != points.size() + 1) {
            throw CsvError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                               " fields, expected " + std::to_string(points.size() + 1),
                           row, static_cast<long>(std::min(fields.size(), points.size() + 1)));
        }
        std::vector<double> values(points.size());
        for (std::size_t c = 1; c < fields.size(); ++c) values[c - 1] = parse_field(fields[c], row, static_cast<long>(c + 1));
        rows.push_back(std::move(values));
    }
    if (points.empty()) throw CsvError("empty curve file", row, 1);
    if (rows.empty()) throw CsvError("curve file has a header but no curves", row, 1);
    GridPtr grid;
    try {
        grid = Grid::make(std::move(points));
    } catch (const std::invalid_argument& e) {
        throw CsvError(std::string("invalid grid header: ") + e.what(), 1, 1);
    }
    return FunctionalSeries::from_rows(std::move(grid), rows);
}

FunctionalSeries read_curves_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open curve file '" + path + "'");
    return read_curves(in);
}

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

namespace {

void write_header(std::ostream& out, const Grid& grid) {
    out << 't';
    for (double t : grid.points()) out << ',' << format_double(t);
    out << '\n';
}

void write_row(std::ostream& out, std::size_t index, const Curve& c) {
    out << index;
    for (double v : c.values()) out << ',' << format_double(v);
    out << '\n';
}

}  // namespace

void write_curves(std::ostream& out, const FunctionalSeries& series) {
    write_header(out, series.grid());
    for (std::size_t i = 0; i < series.size(); ++i) write_row(out, i + 1, series[i]);
}

void write_curve(std::ostream& out, const Curve& curve) {
    write_header(out, curve.grid());
    write_row(out, 1, curve);
}

}  // namespace fsacf::io
