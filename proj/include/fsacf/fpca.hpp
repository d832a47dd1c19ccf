#pragma once

#include "fsacf/core.hpp"
#include "fsacf/linalg.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace fsacf {

/**
 * @brief Functional principal components under the Riemann inner product.
 *
 * Components are computed on the positive-weight grid points; one component
 * exists per such point. Eigenfunction values at zero-weight points are
 * filled in through the kernel map v(t) = (1/lambda) int K(t,s) v(s) ds.
 */
struct FpcaResult {
    Curve mean;
    std::vector<double> eigenvalues;
    std::vector<Curve> eigenfunctions;
    /// n x K matrix of scores <X_i - mean, v_k>.
    linalg::Matrix scores;
    /// cpv[k] = share of total variance in the first k+1 components.
    std::vector<double> cpv;

    [[nodiscard]] std::size_t components() const noexcept { return eigenvalues.size(); }
};

/// Eigenpairs of K(t,s) = (1/n) sum_i (X_i - m)(t)(X_i - m)(s).
/// @throws std::invalid_argument when n < 2.
[[nodiscard]] FpcaResult fpca(const FunctionalSeries& series);

/// Smallest J with CPV(J) > threshold (strict).
[[nodiscard]] std::size_t select_cpv(std::span<const double> eigenvalues, double threshold);

/// Rank-J reconstructions m + sum_{j<=J} xi_ij v_j of the fitted series.
[[nodiscard]] FunctionalSeries reconstruct(const FpcaResult& result, std::size_t J);

/// Scores of arbitrary curves against the first J eigenfunctions (no centering).
[[nodiscard]] linalg::Matrix project(const FunctionalSeries& series, const std::vector<Curve>& basis, std::size_t J);

}  // namespace fsacf
