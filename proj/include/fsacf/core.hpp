#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsacf {

/// Raised when two curves or series live on different discretizations.
class GridMismatchError : public std::invalid_argument {
public:
    explicit GridMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised for invalid data values. Carries the offending curve index and
/// grid point when known (-1 otherwise).
class DataError : public std::runtime_error {
public:
    DataError(const std::string& what, long curve = -1, long point = -1)
        : std::runtime_error(what), curve_(curve), point_(point) {}
    [[nodiscard]] long curve() const noexcept { return curve_; }
    [[nodiscard]] long point() const noexcept { return point_; }

private:
    long curve_;
    long point_;
};

/**
 * @brief Common sampling points t_1 < ... < t_M in [0,1] with left-gap
 * Riemann weights w_j = t_j - t_{j-1}, t_0 = 0.
 *
 * Note that a grid starting at t_1 = 0 assigns zero weight to its first point.
 */
class Grid {
public:
    explicit Grid(std::vector<double> points);

    /// M equally spaced points on [0,1], both endpoints included.
    static std::shared_ptr<const Grid> uniform(std::size_t m);
    static std::shared_ptr<const Grid> make(std::vector<double> points);

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] std::span<const double> points() const noexcept { return points_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    [[nodiscard]] double point(std::size_t j) const { return points_[j]; }
    [[nodiscard]] double weight(std::size_t j) const { return weights_[j]; }

    bool operator==(const Grid& other) const noexcept { return points_ == other.points_; }

private:
    std::vector<double> points_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// True when both pointers refer to the same discretization.
[[nodiscard]] bool same_grid(const GridPtr& a, const GridPtr& b) noexcept;

/// A single functional observation sampled on a grid.
class Curve {
public:
    Curve(GridPtr grid, std::vector<double> values);

    static Curve zeros(GridPtr grid);
    static Curve constant(GridPtr grid, double value);

    /// Samples f at every grid point.
    template <typename F>
    static Curve from_function(GridPtr grid, F&& f) {
        std::vector<double> v(grid->size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid->point(j));
        return Curve(std::move(grid), std::move(v));
    }

    [[nodiscard]] const Grid& grid() const noexcept { return *grid_; }
    [[nodiscard]] const GridPtr& grid_ptr() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t j) const { return values_[j]; }

    Curve& operator+=(const Curve& other);
    Curve& operator-=(const Curve& other);
    Curve& operator*=(double c);

private:
    GridPtr grid_;
    std::vector<double> values_;
};

Curve operator+(Curve a, const Curve& b);
Curve operator-(Curve a, const Curve& b);
Curve operator*(double c, Curve a);
Curve operator*(Curve a, double c);
Curve operator-(Curve a);

/// Ordered sample X_1..X_n on one grid. Indices here are zero-based.
class FunctionalSeries {
public:
    FunctionalSeries(GridPtr grid, std::vector<Curve> curves);

    /// Builds a series from an n x M row-major value matrix.
    static FunctionalSeries from_rows(GridPtr grid, const std::vector<std::vector<double>>& rows);

    [[nodiscard]] const Grid& grid() const noexcept { return *grid_; }
    [[nodiscard]] const GridPtr& grid_ptr() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return curves_.size(); }
    [[nodiscard]] const Curve& operator[](std::size_t i) const { return curves_[i]; }
    [[nodiscard]] const std::vector<Curve>& curves() const noexcept { return curves_; }

    auto begin() const noexcept { return curves_.begin(); }
    auto end() const noexcept { return curves_.end(); }

private:
    GridPtr grid_;
    std::vector<Curve> curves_;
};

/// Kernel k(t_j, t_k) on grid x grid, stored row-major (row index = t).
class Surface {
public:
    Surface(GridPtr grid, std::vector<double> values);
    static Surface zeros(GridPtr grid);

    [[nodiscard]] const Grid& grid() const noexcept { return *grid_; }
    [[nodiscard]] const GridPtr& grid_ptr() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return grid_->size(); }
    [[nodiscard]] double operator()(std::size_t t, std::size_t s) const { return values_[t * size() + s]; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

    /// Riemann approximation of (Kx)(t) = int k(t,s) x(s) ds.
    [[nodiscard]] Curve apply(const Curve& x) const;
    /// Riemann Hilbert-Schmidt norm.
    [[nodiscard]] double norm() const;

    Surface operator-() const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Spatial signs of norm at or below this are mapped to the zero curve.
inline constexpr double kSignFloor = 1e-12;

[[nodiscard]] double inner_product(const Curve& f, const Curve& g);
[[nodiscard]] double norm(const Curve& f);

/// Raw-span variants used by hot loops. No grid checks.
[[nodiscard]] double weighted_dot(std::span<const double> f, std::span<const double> g,
                                  std::span<const double> w) noexcept;

/// S(f - center): unit-norm direction, or the zero curve when the two coincide.
[[nodiscard]] Curve spatial_sign(const Curve& f, const Curve& center);

/// D_i = Y_i - Y_{i-1} for i = 2..n.
[[nodiscard]] FunctionalSeries pointwise_difference(const FunctionalSeries& series);

enum class IntradayKind { log_return, cidr, square };

/**
 * @brief Intraday price-curve transforms.
 *
 * - log_return: R(t_j) = ln P(t_j) - ln P(t_{j-lag}); the first @p lag_points
 *   grid columns are dropped, so the result lives on a shorter grid.
 * - cidr: C(t) = ln P(t) - ln P(t_1), same grid.
 * - square: pointwise square, same grid.
 *
 * @throws DataError naming the curve and grid point of a nonpositive price.
 */
[[nodiscard]] FunctionalSeries intraday_transform(const FunctionalSeries& prices, IntradayKind kind,
                                                  std::size_t lag_points = 1);

/// Cross-sectional sample mean curve.
[[nodiscard]] Curve sample_mean(const FunctionalSeries& series);

}  // namespace fsacf
