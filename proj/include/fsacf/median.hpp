#pragma once

#include "fsacf/core.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fsacf {

struct MedianConfig {
    std::size_t max_iterations = 200;
    /// Stop when the iterate moves by less than tolerance * scale, where the
    /// scale is max(|mu|, mean distance of the data to mu).
    double tolerance = 1e-8;
    /// Data points closer than this to the iterate are treated as coincident.
    double singularity_floor = 1e-10;

    void validate() const;
};

/// Weiszfeld iteration did not settle within max_iterations.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, Curve last_iterate, double objective_change)
        : std::runtime_error(what), last_(std::move(last_iterate)), change_(objective_change) {}
    [[nodiscard]] const Curve& last_iterate() const noexcept { return last_; }
    [[nodiscard]] double objective_change() const noexcept { return change_; }

private:
    Curve last_;
    double change_;
};

struct MedianResult {
    Curve center;
    std::size_t iterations = 0;
    /// Sum of distances, starting with the objective at the initial mean.
    std::vector<double> objective_history;
};

/**
 * @brief Functional spatial (geometric) median, argmin_mu sum_i |X_i - mu|.
 *
 * Weiszfeld fixed-point iteration started from the sample mean. When the
 * iterate coincides with data points (within singularity_floor) those points
 * are removed from the update and the step is damped by their multiplicity
 * (Vardi-Zhang), which keeps the objective non-increasing and lets the
 * iteration stop at a data point that is itself the minimizer.
 *
 * @throws ConvergenceError after max_iterations without meeting tolerance.
 */
[[nodiscard]] MedianResult spatial_median_detailed(const FunctionalSeries& series, const MedianConfig& config = {});

[[nodiscard]] Curve spatial_median(const FunctionalSeries& series, const MedianConfig& config = {});

/// Sum of Riemann distances from every curve to center.
[[nodiscard]] double median_objective(const FunctionalSeries& series, const Curve& center);

}  // namespace fsacf
