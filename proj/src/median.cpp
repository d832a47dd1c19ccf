#include "fsacf/median.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fsacf {

void MedianConfig::validate() const {
    if (max_iterations < 1) throw std::invalid_argument("median max_iterations must be at least 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("median tolerance must be positive");
    if (!(singularity_floor > 0.0)) throw std::invalid_argument("median singularity_floor must be positive");
}

namespace {

double distances(const FunctionalSeries& series, std::span<const double> center, std::vector<double>& dist) {
    const auto w = series.grid().weights();
    const auto m = w.size();
    double total = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto x = series[i].values();
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double d = x[j] - center[j];
            acc += d * d * w[j];
        }
        dist[i] = std::sqrt(acc);
        total += dist[i];
    }
    return total;
}

}  // namespace

double median_objective(const FunctionalSeries& series, const Curve& center) {
    if (!same_grid(series.grid_ptr(), center.grid_ptr())) throw GridMismatchError("median objective: grid mismatch");
    std::vector<double> dist(series.size());
    return distances(series, center.values(), dist);
}

MedianResult spatial_median_detailed(const FunctionalSeries& series, const MedianConfig& config) {
    config.validate();
    const auto n = series.size();
    const auto m = series.grid().size();
    const auto w = series.grid().weights();

    const Curve mean = sample_mean(series);
    std::vector<double> y(mean.values().begin(), mean.values().end());
    std::vector<double> dist(n);
    std::vector<double> next(m);
    std::vector<double> num(m);

    MedianResult result{mean, 0, {}};
    double objective = distances(series, y, dist);
    result.objective_history.push_back(objective);

    for (std::size_t iter = 1; iter <= config.max_iterations; ++iter) {
        std::fill(num.begin(), num.end(), 0.0);
        double den = 0.0;
        std::size_t coincident = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (dist[i] < config.singularity_floor) {
                ++coincident;
                continue;
            }
            const double inv = 1.0 / dist[i];
            const auto x = series[i].values();
            for (std::size_t j = 0; j < m; ++j) num[j] += x[j] * inv;
            den += inv;
        }
        if (den == 0.0) {
            // every observation sits on the iterate
            result.center = Curve(series.grid_ptr(), y);
            result.iterations = iter - 1;
            return result;
        }

        for (std::size_t j = 0; j < m; ++j) next[j] = num[j] / den;
        if (coincident > 0) {
            // Vardi-Zhang damping: R = sum_i (X_i - y)/d_i = den * (T - y)
            double r2 = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double rj = den * (next[j] - y[j]);
                r2 += rj * rj * w[j];
            }
            const double r = std::sqrt(r2);
            const double gamma = r > 0.0 ? std::min(1.0, static_cast<double>(coincident) / r) : 1.0;
            for (std::size_t j = 0; j < m; ++j) next[j] = (1.0 - gamma) * next[j] + gamma * y[j];
        }

        double step2 = 0.0;
        double size2 = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double d = next[j] - y[j];
            step2 += d * d * w[j];
            size2 += next[j] * next[j] * w[j];
        }
        const double new_objective = distances(series, next, dist);
        const double change = objective - new_objective;
        y.swap(next);
        objective = new_objective;
        result.objective_history.push_back(objective);

        const double scale = std::max(std::sqrt(size2), objective / static_cast<double>(n));
        if (std::sqrt(step2) <= config.tolerance * scale) {
            result.center = Curve(series.grid_ptr(), y);
            result.iterations = iter;
            return result;
        }
        if (iter == config.max_iterations) {
            std::ostringstream os;
            os << "spatial median did not converge in " << config.max_iterations
               << " iterations (last objective change " << change << ")";
            throw ConvergenceError(os.str(), Curve(series.grid_ptr(), y), change);
        }
    }
    // unreachable: the loop either returns or throws on its last pass
    throw ConvergenceError("spatial median did not converge", Curve(series.grid_ptr(), y), 0.0);
}

Curve spatial_median(const FunctionalSeries& series, const MedianConfig& config) {
    return spatial_median_detailed(series, config).center;
}

}  // namespace fsacf
