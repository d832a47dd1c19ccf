#include "fsacf/fpca.hpp"

#include <algorithm>
#include <cmath>

namespace fsacf {

using linalg::Matrix;

FpcaResult fpca(const FunctionalSeries& series) {
    const auto n = series.size();
    if (n < 2) throw std::invalid_argument("fpca needs at least 2 curves");
    const auto& grid = series.grid();
    const auto m = grid.size();
    const auto w = grid.weights();

    Curve mean = sample_mean(series);

    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < m; ++j) {
        if (w[j] > 0.0) active.push_back(j);
    }
    const auto ma = active.size();

    // centered data, n x m
    Matrix y(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) y(i, j) = series[i][j] - mean[j];
    }

    // full covariance K (1/n divisor); only its active block enters the eigenproblem
    Matrix k = multiply_transposed_left(y, y);
    const double inv_n = 1.0 / static_cast<double>(n);
    Matrix a(ma, ma);
    for (std::size_t p = 0; p < ma; ++p) {
        for (std::size_t q = 0; q < ma; ++q) {
            const auto jp = active[p];
            const auto jq = active[q];
            a(p, q) = k(jp, jq) * inv_n * std::sqrt(w[jp] * w[jq]);
        }
    }
    const auto eig = linalg::jacobi_eigen(std::move(a));

    FpcaResult out{mean, {}, {}, Matrix(n, ma), {}};
    out.eigenvalues.resize(ma);
    out.eigenfunctions.reserve(ma);
    for (std::size_t c = 0; c < ma; ++c) {
        const double lambda = std::max(eig.values[c], 0.0);
        out.eigenvalues[c] = lambda;
        std::vector<double> v(m, 0.0);
        for (std::size_t p = 0; p < ma; ++p) v[active[p]] = eig.vectors(p, c) / std::sqrt(w[active[p]]);
        if (lambda > 0.0 && ma < m) {
            for (std::size_t j = 0; j < m; ++j) {
                if (w[j] > 0.0) continue;
                double acc = 0.0;
                for (std::size_t p = 0; p < ma; ++p) acc += k(j, active[p]) * inv_n * w[active[p]] * v[active[p]];
                v[j] = acc / lambda;
            }
        }
        std::size_t arg = 0;
        for (std::size_t j = 1; j < m; ++j) {
            if (std::abs(v[j]) > std::abs(v[arg])) arg = j;
        }
        if (v[arg] < 0.0) {
            for (double& x : v) x = -x;
        }
        out.eigenfunctions.emplace_back(series.grid_ptr(), std::move(v));
    }

    for (std::size_t i = 0; i < n; ++i) {
        const auto yi = y.row(i);
        for (std::size_t c = 0; c < ma; ++c) out.scores(i, c) = weighted_dot(yi, out.eigenfunctions[c].values(), w);
    }

    double total = 0.0;
    for (double l : out.eigenvalues) total += l;
    out.cpv.resize(ma);
    double run = 0.0;
    for (std::size_t c = 0; c < ma; ++c) {
        run += out.eigenvalues[c];
        out.cpv[c] = total > 0.0 ? run / total : 0.0;
    }
    return out;
}

std::size_t select_cpv(std::span<const double> eigenvalues, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw std::invalid_argument("CPV threshold must lie in (0,1)");
    double total = 0.0;
    std::size_t positive = 0;
    for (double l : eigenvalues) {
        if (l > 0.0) {
            total += l;
            ++positive;
        }
    }
    if (positive == 0) throw std::invalid_argument("CPV undefined: all eigenvalues are zero");
    double run = 0.0;
    for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
        run += std::max(eigenvalues[j], 0.0);
        if (run / total > threshold) return j + 1;
    }
    // rounding kept the final ratio at or below the threshold
    return positive;
}

FunctionalSeries reconstruct(const FpcaResult& result, std::size_t J) {
    if (J < 1 || J > result.components()) throw std::invalid_argument("reconstruction rank out of range");
    const auto n = result.scores.rows();
    const auto m = result.mean.size();
    std::vector<Curve> curves;
    curves.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> v(result.mean.values().begin(), result.mean.values().end());
        for (std::size_t c = 0; c < J; ++c) {
            const double xi = result.scores(i, c);
            const auto f = result.eigenfunctions[c].values();
            for (std::size_t j = 0; j < m; ++j) v[j] += xi * f[j];
        }
        curves.emplace_back(result.mean.grid_ptr(), std::move(v));
    }
    return FunctionalSeries(result.mean.grid_ptr(), std::move(curves));
}

Matrix project(const FunctionalSeries& series, const std::vector<Curve>& basis, std::size_t J) {
    if (J > basis.size()) throw std::invalid_argument("projection rank exceeds basis size");
    const auto w = series.grid().weights();
    Matrix out(series.size(), J);
    for (std::size_t c = 0; c < J; ++c) {
        if (!same_grid(series.grid_ptr(), basis[c].grid_ptr())) throw GridMismatchError("basis is not on the series grid");
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        for (std::size_t c = 0; c < J; ++c) out(i, c) = weighted_dot(series[i].values(), basis[c].values(), w);
    }
    return out;
}

}  // namespace fsacf
