#pragma once

#include "fsacf/core.hpp"

#include <iosfwd>
#include <string>

namespace fsacf::io {

/// Malformed CSV input; row and column are 1-based positions in the file.
class CsvError : public DataError {
public:
    CsvError(const std::string& what, long row, long column)
        : DataError(what, row, column), row_(row), column_(column) {}
    [[nodiscard]] long row() const noexcept { return row_; }
    [[nodiscard]] long column() const noexcept { return column_; }

private:
    long row_;
    long column_;
};

/**
 * Curve matrix format:
 *
 *     t,<t_1>,...,<t_M>
 *     1,<X_1(t_1)>,...,<X_1(t_M)>
 *     ...
 *
 * The leading index column is written 1..n and ignored on read.
 */
[[nodiscard]] FunctionalSeries read_curves(std::istream& in);
[[nodiscard]] FunctionalSeries read_curves_file(const std::string& path);

void write_curves(std::ostream& out, const FunctionalSeries& series);
void write_curve(std::ostream& out, const Curve& curve);

/// Shortest representation that parses back to the identical double.
[[nodiscard]] std::string format_double(double x);

}  // namespace fsacf::io
