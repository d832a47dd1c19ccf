#include "fsacf/far.hpp"

#include "fsacf/fpca.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fsacf {

using linalg::Matrix;

Matrix FarModel::block(std::size_t index) const {
    if (index >= lags.size()) throw std::out_of_range("FAR block index out of range");
    Matrix b(dimension, dimension);
    for (std::size_t j = 0; j < dimension; ++j) {
        for (std::size_t r = 0; r < dimension; ++r) b(j, r) = coefficients(index * dimension + j, r);
    }
    return b;
}

Surface FarModel::kernel(std::size_t index) const {
    const Matrix b = block(index);
    const auto& grid = mean.grid_ptr();
    const auto m = grid->size();
    std::vector<double> values(m * m, 0.0);
    for (std::size_t j = 0; j < dimension; ++j) {
        const auto vj = eigenfunctions[j].values();
        for (std::size_t r = 0; r < dimension; ++r) {
            const double c = b(j, r);
            if (c == 0.0) continue;
            const auto vr = eigenfunctions[r].values();
            for (std::size_t t = 0; t < m; ++t) {
                const double ct = c * vr[t];
                double* row = values.data() + t * m;
                for (std::size_t s = 0; s < m; ++s) row[s] += ct * vj[s];
            }
        }
    }
    return Surface(grid, std::move(values));
}

namespace {

std::vector<std::size_t> normalize_lags(std::vector<std::size_t> lags) {
    if (lags.empty()) throw std::invalid_argument("FSAR needs at least one lag");
    std::sort(lags.begin(), lags.end());
    if (lags.front() == 0) throw std::invalid_argument("FSAR lags must be positive");
    if (std::adjacent_find(lags.begin(), lags.end()) != lags.end()) throw std::invalid_argument("FSAR lags must be distinct");
    return lags;
}

}  // namespace

FarModel fit_fsar(const FunctionalSeries& series, std::vector<std::size_t> lags, DimensionRule dimension) {
    lags = normalize_lags(std::move(lags));
    const auto n = series.size();
    const auto fp = fpca(series);

    std::size_t p = 0;
    if (dimension.kind == DimensionRule::Kind::fixed) {
        p = dimension.p;
        if (p < 1 || p > fp.components()) throw std::invalid_argument("FPC dimension out of range");
    } else {
        p = select_cpv(fp.eigenvalues, dimension.threshold);
    }
    const auto lmax = lags.back();
    if (n <= lmax + p) {
        std::ostringstream os;
        os << "FSAR fit needs n > max lag + p (n = " << n << ", max lag = " << lmax << ", p = " << p << ")";
        throw std::invalid_argument(os.str());
    }

    const auto k = lags.size();
    const auto rows = n - lmax;
    Matrix design(rows, k * p);
    Matrix response(rows, p);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto i = r + lmax;  // zero-based index of the response curve
        for (std::size_t b = 0; b < k; ++b) {
            for (std::size_t j = 0; j < p; ++j) design(r, b * p + j) = fp.scores(i - lags[b], j);
        }
        for (std::size_t j = 0; j < p; ++j) response(r, j) = fp.scores(i, j);
    }

    const Matrix gram = multiply_transposed_left(design, design);
    const Matrix rhs = multiply_transposed_left(design, response);
    Matrix coef;
    try {
        coef = linalg::cholesky_solve(gram, rhs, 1e-12);
    } catch (const linalg::SingularMatrixError& e) {
        throw linalg::SingularMatrixError(std::string(e.what()) + "; try a smaller FPC dimension p");
    }

    return FarModel{std::move(lags),
                    p,
                    std::move(coef),
                    {fp.eigenfunctions.begin(), fp.eigenfunctions.begin() + static_cast<long>(p)},
                    {fp.eigenvalues.begin(), fp.eigenvalues.begin() + static_cast<long>(p)},
                    fp.mean,
                    n};
}

Surface far1_kernel_pca(const FunctionalSeries& series, std::size_t J) {
    const auto n = series.size();
    if (n < 2) throw std::invalid_argument("FAR(1) kernel estimate needs at least 2 curves");
    const auto fp = fpca(series);
    if (J < 1 || J > fp.components()) throw std::invalid_argument("number of components out of range");
    if (!(fp.eigenvalues[J - 1] > 1e-12 * fp.eigenvalues[0])) {
        throw std::invalid_argument("eigenvalue " + std::to_string(J) + " is too small to invert; choose a smaller J");
    }

    // coefficient c[j][i] = 1/(n-1) sum_k xi_{k,j} xi_{k+1,i} / lambda_j
    Matrix c(J, J);
    for (std::size_t kk = 0; kk + 1 < n; ++kk) {
        for (std::size_t j = 0; j < J; ++j) {
            const double a = fp.scores(kk, j);
            for (std::size_t i = 0; i < J; ++i) c(j, i) += a * fp.scores(kk + 1, i);
        }
    }
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t i = 0; i < J; ++i) c(j, i) /= (static_cast<double>(n - 1) * fp.eigenvalues[j]);
    }

    const auto m = series.grid().size();
    std::vector<double> values(m * m, 0.0);
    for (std::size_t j = 0; j < J; ++j) {
        const auto vj = fp.eigenfunctions[j].values();
        for (std::size_t i = 0; i < J; ++i) {
            const auto vi = fp.eigenfunctions[i].values();
            for (std::size_t t = 0; t < m; ++t) {
                const double ct = c(j, i) * vi[t];
                double* row = values.data() + t * m;
                for (std::size_t s = 0; s < m; ++s) row[s] += ct * vj[s];
            }
        }
    }
    return Surface(series.grid_ptr(), std::move(values));
}

FitResiduals fitted_and_residuals(const FarModel& model, const FunctionalSeries& series) {
    if (!same_grid(series.grid_ptr(), model.mean.grid_ptr())) {
        throw GridMismatchError("series grid differs from the model's eigenfunction grid");
    }
    const auto n = series.size();
    const auto lmax = model.max_lag();
    if (n <= lmax) throw std::invalid_argument("series is not longer than the largest model lag");
    const auto p = model.dimension;
    const auto m = series.grid().size();
    const auto w = series.grid().weights();

    // scores of the centered input curves
    Matrix scores(n, p);
    std::vector<double> centered(m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) centered[j] = series[i][j] - model.mean[j];
        for (std::size_t c = 0; c < p; ++c) scores(i, c) = weighted_dot(centered, model.eigenfunctions[c].values(), w);
    }

    std::vector<Curve> fitted;
    std::vector<Curve> residuals;
    fitted.reserve(n - lmax);
    residuals.reserve(n - lmax);
    std::vector<double> predicted(p);
    for (std::size_t i = lmax; i < n; ++i) {
        std::fill(predicted.begin(), predicted.end(), 0.0);
        for (std::size_t b = 0; b < model.lags.size(); ++b) {
            const auto src = i - model.lags[b];
            for (std::size_t j = 0; j < p; ++j) {
                const double xj = scores(src, j);
                for (std::size_t r = 0; r < p; ++r) predicted[r] += xj * model.coefficients(b * p + j, r);
            }
        }
        std::vector<double> v(model.mean.values().begin(), model.mean.values().end());
        for (std::size_t r = 0; r < p; ++r) {
            const auto f = model.eigenfunctions[r].values();
            for (std::size_t t = 0; t < m; ++t) v[t] += predicted[r] * f[t];
        }
        Curve fit(series.grid_ptr(), std::move(v));
        residuals.push_back(series[i] - fit);
        fitted.push_back(std::move(fit));
    }
    return {FunctionalSeries(series.grid_ptr(), std::move(fitted)),
            FunctionalSeries(series.grid_ptr(), std::move(residuals))};
}

FitResiduals fitted_from_kernels(const std::vector<std::pair<std::size_t, Surface>>& kernels, const Curve& mean,
                                 const FunctionalSeries& series) {
    if (kernels.empty()) throw std::invalid_argument("at least one kernel is required");
    std::size_t lmax = 0;
    for (const auto& [lag, surface] : kernels) {
        if (lag == 0) throw std::invalid_argument("kernel lags must be positive");
        if (!same_grid(surface.grid_ptr(), series.grid_ptr())) throw GridMismatchError("kernel grid differs from series grid");
        lmax = std::max(lmax, lag);
    }
    if (series.size() <= lmax) throw std::invalid_argument("series is not longer than the largest kernel lag");
    std::vector<Curve> fitted;
    std::vector<Curve> residuals;
    for (std::size_t i = lmax; i < series.size(); ++i) {
        Curve fit = mean;
        for (const auto& [lag, surface] : kernels) fit += surface.apply(series[i - lag] - mean);
        residuals.push_back(series[i] - fit);
        fitted.push_back(std::move(fit));
    }
    return {FunctionalSeries(series.grid_ptr(), std::move(fitted)),
            FunctionalSeries(series.grid_ptr(), std::move(residuals))};
}

}  // namespace fsacf
