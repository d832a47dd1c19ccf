#pragma once

#include "fsacf/core.hpp"
#include "fsacf/linalg.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace fsacf {

/// How many principal components span the score space.
struct DimensionRule {
    enum class Kind { fixed, cpv };
    Kind kind = Kind::cpv;
    std::size_t p = 0;
    double threshold = 0.9;

    static DimensionRule fixed(std::size_t p) { return {Kind::fixed, p, 0.0}; }
    static DimensionRule cpv(double threshold) { return {Kind::cpv, 0, threshold}; }
};

/**
 * @brief Functional (seasonal) autoregression estimated in FPC score space.
 *
 * coefficients stacks one p x p block per lag. With row score vectors the
 * model reads xi_i' = sum_l xi_{i-l}' Phi_l, so block entry [j, r] maps the
 * lagged j-th score onto the r-th score of the response.
 */
struct FarModel {
    std::vector<std::size_t> lags;
    std::size_t dimension = 0;
    linalg::Matrix coefficients;
    std::vector<Curve> eigenfunctions;
    std::vector<double> eigenvalues;
    Curve mean;
    std::size_t training_size = 0;

    [[nodiscard]] std::size_t max_lag() const { return lags.back(); }
    [[nodiscard]] linalg::Matrix block(std::size_t index) const;
    /// phi_l(t,s) = sum_{j,r} Phi_l[j,r] v_r(t) v_j(s).
    [[nodiscard]] Surface kernel(std::size_t index) const;
};

/**
 * @brief Least-squares FSAR fit on the scores of the mean-centered series.
 *
 * FAR(p) is the special case lags = 1..p.
 * @throws std::invalid_argument for empty/duplicate lags or n <= max lag + p.
 * @throws linalg::SingularMatrixError when the lagged score design is singular.
 */
[[nodiscard]] FarModel fit_fsar(const FunctionalSeries& series, std::vector<std::size_t> lags, DimensionRule dimension);

/**
 * @brief FAR(1) kernel estimate
 * phi(t,s) = 1/(n-1) sum_k sum_{j,i<=J} lambda_j^{-1} xi_{k,j} xi_{k+1,i} v_j(s) v_i(t)
 * with scores of the mean-centered series.
 */
[[nodiscard]] Surface far1_kernel_pca(const FunctionalSeries& series, std::size_t J);

struct FitResiduals {
    /// Fitted and residual curves for observations max_lag+1..n.
    FunctionalSeries fitted;
    FunctionalSeries residuals;
};

[[nodiscard]] FitResiduals fitted_and_residuals(const FarModel& model, const FunctionalSeries& series);

/// Fitted values mean + sum_l int phi_l(t,s) (X_{i-l}(s) - mean(s)) ds by direct kernel quadrature.
[[nodiscard]] FitResiduals fitted_from_kernels(const std::vector<std::pair<std::size_t, Surface>>& kernels,
                                               const Curve& mean, const FunctionalSeries& series);

}  // namespace fsacf
