#include "fsacf/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fsacf {

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw std::invalid_argument("grid needs at least 2 points");
    double prev = 0.0;
    weights_.resize(points_.size());
    for (std::size_t j = 0; j < points_.size(); ++j) {
        const double t = points_[j];
        if (!std::isfinite(t) || t < 0.0 || t > 1.0) {
            std::ostringstream os;
            os << "grid point " << j << " = " << t << " outside [0,1]";
            throw std::invalid_argument(os.str());
        }
        if (j > 0 && !(t > points_[j - 1])) {
            std::ostringstream os;
            os << "grid points not strictly increasing at index " << j;
            throw std::invalid_argument(os.str());
        }
        weights_[j] = t - prev;
        prev = t;
    }
}

GridPtr Grid::uniform(std::size_t m) {
    if (m < 2) throw std::invalid_argument("grid needs at least 2 points");
    std::vector<double> pts(m);
    for (std::size_t j = 0; j < m; ++j) pts[j] = static_cast<double>(j) / static_cast<double>(m - 1);
    return std::make_shared<const Grid>(std::move(pts));
}

GridPtr Grid::make(std::vector<double> points) { return std::make_shared<const Grid>(std::move(points)); }

bool same_grid(const GridPtr& a, const GridPtr& b) noexcept {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

namespace {

void require_same(const GridPtr& a, const GridPtr& b, const char* op) {
    if (!same_grid(a, b)) throw GridMismatchError(std::string(op) + ": curves are on different grids");
}

}  // namespace

Curve::Curve(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("curve requires a grid");
    if (values_.size() != grid_->size()) {
        std::ostringstream os;
        os << "curve has " << values_.size() << " values but grid has " << grid_->size() << " points";
        throw std::invalid_argument(os.str());
    }
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (!std::isfinite(values_[j])) throw DataError("non-finite curve value", -1, static_cast<long>(j));
    }
}

Curve Curve::zeros(GridPtr grid) { return constant(std::move(grid), 0.0); }

Curve Curve::constant(GridPtr grid, double value) {
    const auto m = grid->size();
    return Curve(std::move(grid), std::vector<double>(m, value));
}

Curve& Curve::operator+=(const Curve& other) {
    require_same(grid_, other.grid_, "curve addition");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
    return *this;
}

Curve& Curve::operator-=(const Curve& other) {
    require_same(grid_, other.grid_, "curve subtraction");
    for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
    return *this;
}

Curve& Curve::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

Curve operator+(Curve a, const Curve& b) { return a += b; }
Curve operator-(Curve a, const Curve& b) { return a -= b; }
Curve operator*(double c, Curve a) { return a *= c; }
Curve operator*(Curve a, double c) { return a *= c; }
Curve operator-(Curve a) { return a *= -1.0; }

FunctionalSeries::FunctionalSeries(GridPtr grid, std::vector<Curve> curves)
    : grid_(std::move(grid)), curves_(std::move(curves)) {
    if (!grid_) throw std::invalid_argument("series requires a grid");
    if (curves_.empty()) throw std::invalid_argument("series must contain at least one curve");
    for (std::size_t i = 0; i < curves_.size(); ++i) {
        if (!same_grid(grid_, curves_[i].grid_ptr())) {
            throw GridMismatchError("curve " + std::to_string(i) + " is not on the series grid");
        }
    }
}

FunctionalSeries FunctionalSeries::from_rows(GridPtr grid, const std::vector<std::vector<double>>& rows) {
    std::vector<Curve> curves;
    curves.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        try {
            curves.emplace_back(grid, rows[i]);
        } catch (const DataError& e) {
            throw DataError(e.what(), static_cast<long>(i), e.point());
        }
    }
    return FunctionalSeries(std::move(grid), std::move(curves));
}

Surface::Surface(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("surface requires a grid");
    if (values_.size() != grid_->size() * grid_->size()) throw std::invalid_argument("surface size mismatch");
}

Surface Surface::zeros(GridPtr grid) {
    const auto m = grid->size();
    return Surface(std::move(grid), std::vector<double>(m * m, 0.0));
}

Curve Surface::apply(const Curve& x) const {
    require_same(grid_, x.grid_ptr(), "kernel application");
    const auto m = size();
    const auto w = grid_->weights();
    std::vector<double> wx(m);
    for (std::size_t s = 0; s < m; ++s) wx[s] = w[s] * x[s];
    std::vector<double> out(m, 0.0);
    for (std::size_t t = 0; t < m; ++t) {
        const double* row = values_.data() + t * m;
        double acc = 0.0;
        for (std::size_t s = 0; s < m; ++s) acc += row[s] * wx[s];
        out[t] = acc;
    }
    return Curve(grid_, std::move(out));
}

double Surface::norm() const {
    const auto m = size();
    const auto w = grid_->weights();
    double acc = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        for (std::size_t s = 0; s < m; ++s) {
            const double v = values_[t * m + s];
            acc += v * v * w[t] * w[s];
        }
    }
    return std::sqrt(acc);
}

Surface Surface::operator-() const {
    std::vector<double> v(values_);
    for (double& x : v) x = -x;
    return Surface(grid_, std::move(v));
}

double weighted_dot(std::span<const double> f, std::span<const double> g, std::span<const double> w) noexcept {
    double acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) acc += f[j] * g[j] * w[j];
    return acc;
}

double inner_product(const Curve& f, const Curve& g) {
    require_same(f.grid_ptr(), g.grid_ptr(), "inner product");
    return weighted_dot(f.values(), g.values(), f.grid().weights());
}

double norm(const Curve& f) { return std::sqrt(weighted_dot(f.values(), f.values(), f.grid().weights())); }

Curve spatial_sign(const Curve& f, const Curve& center) {
    Curve d = f - center;
    const double r = norm(d);
    if (r <= kSignFloor) return Curve::zeros(f.grid_ptr());
    d *= 1.0 / r;
    return d;
}

FunctionalSeries pointwise_difference(const FunctionalSeries& series) {
    if (series.size() < 2) throw std::invalid_argument("pointwise difference needs at least 2 curves");
    std::vector<Curve> out;
    out.reserve(series.size() - 1);
    for (std::size_t i = 1; i < series.size(); ++i) out.push_back(series[i] - series[i - 1]);
    return FunctionalSeries(series.grid_ptr(), std::move(out));
}

FunctionalSeries intraday_transform(const FunctionalSeries& prices, IntradayKind kind, std::size_t lag_points) {
    const auto m = prices.grid().size();
    if (kind == IntradayKind::square) {
        std::vector<Curve> out;
        out.reserve(prices.size());
        for (const auto& c : prices) {
            std::vector<double> v(c.values().begin(), c.values().end());
            for (double& x : v) x *= x;
            out.emplace_back(prices.grid_ptr(), std::move(v));
        }
        return FunctionalSeries(prices.grid_ptr(), std::move(out));
    }

    for (std::size_t i = 0; i < prices.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!(prices[i][j] > 0.0)) {
                std::ostringstream os;
                os << "nonpositive price " << prices[i][j] << " in curve " << i << " at grid point " << j;
                throw DataError(os.str(), static_cast<long>(i), static_cast<long>(j));
            }
        }
    }

    if (kind == IntradayKind::cidr) {
        std::vector<Curve> out;
        out.reserve(prices.size());
        for (const auto& c : prices) {
            const double base = std::log(c[0]);
            std::vector<double> v(m);
            for (std::size_t j = 0; j < m; ++j) v[j] = std::log(c[j]) - base;
            out.emplace_back(prices.grid_ptr(), std::move(v));
        }
        return FunctionalSeries(prices.grid_ptr(), std::move(out));
    }

    if (lag_points < 1) throw std::invalid_argument("log return lag must be at least one grid step");
    if (m < lag_points + 2) throw std::invalid_argument("log return lag leaves fewer than 2 grid points");
    auto pts = prices.grid().points();
    auto grid = Grid::make(std::vector<double>(pts.begin() + static_cast<long>(lag_points), pts.end()));
    std::vector<Curve> out;
    out.reserve(prices.size());
    for (const auto& c : prices) {
        std::vector<double> v(m - lag_points);
        for (std::size_t j = lag_points; j < m; ++j) v[j - lag_points] = std::log(c[j]) - std::log(c[j - lag_points]);
        out.emplace_back(grid, std::move(v));
    }
    return FunctionalSeries(grid, std::move(out));
}

Curve sample_mean(const FunctionalSeries& series) {
    const auto m = series.grid().size();
    std::vector<double> acc(m, 0.0);
    for (const auto& c : series) {
        for (std::size_t j = 0; j < m; ++j) acc[j] += c[j];
    }
    const double inv = 1.0 / static_cast<double>(series.size());
    for (double& v : acc) v *= inv;
    return Curve(series.grid_ptr(), std::move(acc));
}

}  // namespace fsacf
