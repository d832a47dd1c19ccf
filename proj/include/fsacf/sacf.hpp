#pragma once

#include "fsacf/core.hpp"
#include "fsacf/median.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace fsacf {

enum class CenterSource { estimated_median, supplied_center };

/**
 * @brief Spherical autocorrelation estimates for lags 1..H.
 *
 * rho[h-1] holds the lag-h value. The lag-0 value (share of curves that do
 * not coincide with the center) is kept separately and never enters the
 * portmanteau statistic.
 */
struct SacfEstimate {
    std::size_t n = 0;
    std::vector<double> rho;
    double rho0 = 1.0;
    /// Hilbert-Schmidt norm of the sign covariance kernel.
    double cp_norm = 0.0;
    CenterSource centered_by = CenterSource::estimated_median;
    std::optional<Curve> center;

    [[nodiscard]] std::size_t max_lag() const noexcept { return rho.size(); }
    [[nodiscard]] double at(std::size_t h) const;
    /// Half-width of the (1 - alpha) strong-white-noise band.
    [[nodiscard]] double bound(double alpha) const;
};

struct PortmanteauResult {
    std::size_t H = 0;
    double statistic = 0.0;
    double p_value = 1.0;
};

/**
 * @brief fSACF estimator rho_h = (1/n) sum_{i=1}^{n-h} <S(X_i - mu), S(X_{i+h} - mu)>.
 *
 * With no center the spatial median is estimated first; with a supplied
 * center the same formula gives the known-center estimator.
 *
 * @throws std::invalid_argument when H >= n.
 * @throws ConvergenceError when the median estimate fails.
 */
[[nodiscard]] SacfEstimate sacf(const FunctionalSeries& series, std::size_t H,
                                const std::optional<Curve>& center = std::nullopt,
                                const MedianConfig& config = {});

/// Spatial signs of every curve about center, row i = S(X_i - center).
[[nodiscard]] std::vector<std::vector<double>> spatial_signs(const FunctionalSeries& series, const Curve& center);

/// Riemann Hilbert-Schmidt norm of C_P(t,s) = (1/n) sum_i S_i(t) S_i(s).
[[nodiscard]] double cp_norm(const FunctionalSeries& series, const Curve& center);

/// b = z_{1-alpha/2} * cp_norm / sqrt(n); the band is [-b, b].
[[nodiscard]] double confidence_bound(std::size_t n, double cp_norm, double alpha);

/// Q = n sum_{h<=H} rho_h^2 with p = P(chi^2(H) > Q / cp_norm^2).
[[nodiscard]] PortmanteauResult portmanteau(const SacfEstimate& estimate, std::size_t H);

/**
 * @brief Classical functional ACF, |C_h|_2 / int C_0(t,t) dt, mean-centered.
 *
 * Returns H+1 values for lags 0..H.
 * @throws DataError when the lag-0 trace is zero.
 */
[[nodiscard]] std::vector<double> facf(const FunctionalSeries& series, std::size_t H);

}  // namespace fsacf
