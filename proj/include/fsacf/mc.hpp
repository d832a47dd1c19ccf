#pragma once

#include "fsacf/median.hpp"
#include "fsacf/rng.hpp"
#include "fsacf/simulate.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fsacf::mc {

/// Empirical rejection (or non-coverage) frequency.
struct Rate {
    std::size_t hits = 0;
    std::size_t trials = 0;

    [[nodiscard]] double value() const noexcept {
        return trials == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(trials);
    }
    /// sqrt(p (1 - p) / trials)
    [[nodiscard]] double standard_error() const noexcept {
        if (trials == 0) return 0.0;
        const double p = value();
        return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    }
};

enum class CenterMode { estimated, known_zero, both };
enum class CenterArm { estimated, known_zero };
enum class Statistic { band, portmanteau };

[[nodiscard]] std::string to_string(CenterArm arm);
[[nodiscard]] std::string to_string(Statistic stat);
[[nodiscard]] CenterMode parse_center_mode(const std::string& text);

struct ExperimentConfig {
    sim::ProcessSpec process{sim::BrownianBridge{}};
    std::vector<std::size_t> n_list{100, 250, 500, 1000, 2000};
    std::vector<double> alphas{0.10, 0.05, 0.01};
    std::vector<std::size_t> lags{1, 5, 10};
    /// Portmanteau max lags whose size is reported next to the band cells.
    std::vector<std::size_t> H_list{};
    std::size_t replications = 1000;
    Seed seed{};
    CenterMode center_mode = CenterMode::estimated;
    std::size_t grid_points = 101;
    MedianConfig median{};
    /// Worker threads; 0 picks the hardware concurrency.
    std::size_t threads = 0;

    void validate() const;
};

struct CoverageCell {
    std::size_t n = 0;
    Statistic statistic = Statistic::band;
    /// Lag h for band cells, max lag H for portmanteau cells.
    std::size_t lag = 0;
    double alpha = 0.0;
    CenterArm arm = CenterArm::estimated;
    Rate rate;
    /// Replications dropped because the median failed to converge.
    std::size_t errors = 0;
};

struct CoverageReport {
    std::string process;
    std::size_t replications = 0;
    std::uint64_t seed = 0;
    std::vector<CoverageCell> cells;

    [[nodiscard]] const CoverageCell& find(std::size_t n, std::size_t lag, double alpha,
                                           CenterArm arm = CenterArm::estimated,
                                           Statistic statistic = Statistic::band) const;
};

/**
 * @brief Rate at which rho_h falls outside the strong-white-noise band.
 *
 * Every (n, h, alpha, arm) cell is evaluated on the same replicated series,
 * so the estimated and known-center arms are paired.
 */
[[nodiscard]] CoverageReport coverage_study(const ExperimentConfig& config);

struct PowerConfig {
    std::vector<double> S_grid{0.0, 0.15, 0.3, 0.45, 0.6};
    std::vector<std::size_t> n_list{100, 250, 500, 1000};
    std::vector<std::size_t> H_list{1, 10};
    std::size_t replications = 1000;
    Seed seed{};
    double alpha = 0.05;
    std::size_t grid_points = 101;
    std::size_t burn_in = 100;
    MedianConfig median{};
    std::size_t threads = 0;
};

struct PowerCell {
    double S = 0.0;
    std::size_t n = 0;
    std::size_t H = 0;
    Rate rate;
    std::size_t errors = 0;
};

struct PowerReport {
    double alpha = 0.05;
    std::size_t replications = 0;
    std::uint64_t seed = 0;
    std::vector<PowerCell> cells;

    [[nodiscard]] const PowerCell& find(double S, std::size_t n, std::size_t H) const;
};

/// Portmanteau rejection rate on FAR(1, S) data.
[[nodiscard]] PowerReport power_study(const PowerConfig& config);

enum class VarianceArm { normal_true, t_true, normal_estimated, t_estimated };
[[nodiscard]] std::string to_string(VarianceArm arm);

struct VarianceConfig {
    std::vector<std::pair<double, double>> lambda_pairs{{1.0, 2.0}, {1.0, 1.0}};
    std::vector<std::size_t> n_list{100, 250, 500};
    std::vector<double> alphas{0.01, 0.05, 0.10};
    std::vector<std::size_t> lags{1, 5, 10};
    std::size_t replications = 1000;
    Seed seed{};
    std::size_t grid_points = 101;
    MedianConfig median{};
    std::size_t threads = 0;
};

struct VarianceCell {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::size_t n = 0;
    std::size_t lag = 0;
    double alpha = 0.0;
    VarianceArm arm = VarianceArm::normal_true;
    Rate rate;
    std::size_t errors = 0;
};

struct VarianceReport {
    std::size_t replications = 0;
    std::uint64_t seed = 0;
    std::vector<VarianceCell> cells;

    [[nodiscard]] const VarianceCell& find(double lambda1, double lambda2, std::size_t n, std::size_t lag,
                                           double alpha, VarianceArm arm) const;
};

/// Closed-form squared HS norm of the sign covariance of the two-dimensional
/// Gaussian process; only (1,1) and (1,2) are available.
[[nodiscard]] double true_cp_norm_squared(double lambda1, double lambda2);

/// Band non-coverage on the two-dimensional Gaussian process for
/// {normal, t(n-1)} quantiles x {closed-form, estimated} sign-covariance norm.
[[nodiscard]] VarianceReport variance_study(const VarianceConfig& config);

struct MisfitConfig {
    double S1 = 0.4;
    double S2 = 0.4;
    std::size_t n = 1000;
    std::size_t H = 10;
    double alpha = 0.05;
    double cpv = 0.9;
    std::size_t replications = 200;
    Seed seed{};
    std::size_t grid_points = 101;
    std::size_t burn_in = 100;
    MedianConfig median{};
    std::size_t threads = 0;
};

struct MisfitReport {
    double S1 = 0.0;
    double S2 = 0.0;
    std::size_t n = 0;
    std::size_t H = 0;
    double alpha = 0.05;
    /// Portmanteau rejection on residuals of the correctly specified FAR(2) fit.
    Rate far2;
    /// Same for the underspecified FAR(1) fit.
    Rate far1;
    std::size_t errors = 0;
};

[[nodiscard]] MisfitReport misfit_study(const MisfitConfig& config);

/**
 * @brief Runs fn(r) for r in [0, count) on a worker pool.
 *
 * Results come back indexed by replication, so any reduction over them is
 * independent of scheduling.
 */
template <typename Result, typename Fn>
[[nodiscard]] std::vector<Result> run_replications(std::size_t count, std::size_t threads, Fn&& fn);

}  // namespace fsacf::mc

#include "fsacf/detail/mc_runner.hpp"
