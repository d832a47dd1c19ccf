#include "fsacf/sacf.hpp"

#include "fsacf/distributions.hpp"

#include <cmath>
#include <sstream>

namespace fsacf {

double SacfEstimate::at(std::size_t h) const {
    if (h == 0) return rho0;
    if (h > rho.size()) throw std::out_of_range("lag beyond estimated range");
    return rho[h - 1];
}

double SacfEstimate::bound(double alpha) const { return confidence_bound(n, cp_norm, alpha); }

std::vector<std::vector<double>> spatial_signs(const FunctionalSeries& series, const Curve& center) {
    if (!same_grid(series.grid_ptr(), center.grid_ptr())) throw GridMismatchError("center is not on the series grid");
    const auto w = series.grid().weights();
    const auto m = w.size();
    const auto mu = center.values();
    std::vector<std::vector<double>> signs(series.size(), std::vector<double>(m));
    for (std::size_t i = 0; i < series.size(); ++i) {
        auto& s = signs[i];
        const auto x = series[i].values();
        double r2 = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            s[j] = x[j] - mu[j];
            r2 += s[j] * s[j] * w[j];
        }
        const double r = std::sqrt(r2);
        if (r <= kSignFloor) {
            std::fill(s.begin(), s.end(), 0.0);
        } else {
            const double inv = 1.0 / r;
            for (double& v : s) v *= inv;
        }
    }
    return signs;
}

namespace {

double cp_norm_from_signs(const std::vector<std::vector<double>>& signs, std::span<const double> w) {
    const auto m = w.size();
    std::vector<double> sw(m);
    for (std::size_t j = 0; j < m; ++j) sw[j] = std::sqrt(w[j]);
    // accumulate the upper triangle of sum_i (S_i * sqrt(w))(S_i * sqrt(w))'
    std::vector<double> c(m * m, 0.0);
    std::vector<double> v(m);
    for (const auto& s : signs) {
        for (std::size_t j = 0; j < m; ++j) v[j] = s[j] * sw[j];
        for (std::size_t j = 0; j < m; ++j) {
            const double vj = v[j];
            if (vj == 0.0) continue;
            double* row = c.data() + j * m;
            for (std::size_t k = j; k < m; ++k) row[k] += vj * v[k];
        }
    }
    const double inv_n = 1.0 / static_cast<double>(signs.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double d = c[j * m + j] * inv_n;
        acc += d * d;
        for (std::size_t k = j + 1; k < m; ++k) {
            const double e = c[j * m + k] * inv_n;
            acc += 2.0 * e * e;
        }
    }
    return std::sqrt(acc);
}

}  // namespace

double cp_norm(const FunctionalSeries& series, const Curve& center) {
    const auto signs = spatial_signs(series, center);
    return cp_norm_from_signs(signs, series.grid().weights());
}

SacfEstimate sacf(const FunctionalSeries& series, std::size_t H, const std::optional<Curve>& center,
                  const MedianConfig& config) {
    const auto n = series.size();
    if (H >= n) {
        std::ostringstream os;
        os << "maximum lag H = " << H << " must be smaller than the sample size n = " << n;
        throw std::invalid_argument(os.str());
    }
    SacfEstimate est;
    est.n = n;
    if (center) {
        if (!same_grid(series.grid_ptr(), center->grid_ptr())) throw GridMismatchError("center is not on the series grid");
        est.center = *center;
        est.centered_by = CenterSource::supplied_center;
    } else {
        est.center = spatial_median(series, config);
        est.centered_by = CenterSource::estimated_median;
    }

    const auto signs = spatial_signs(series, *est.center);
    const auto w = series.grid().weights();
    const double inv_n = 1.0 / static_cast<double>(n);

    std::size_t nondegenerate = 0;
    for (const auto& s : signs) {
        if (weighted_dot(s, s, w) > 0.0) ++nondegenerate;
    }
    est.rho0 = static_cast<double>(nondegenerate) * inv_n;

    est.rho.assign(H, 0.0);
    for (std::size_t h = 1; h <= H; ++h) {
        double acc = 0.0;
        for (std::size_t i = 0; i + h < n; ++i) acc += weighted_dot(signs[i], signs[i + h], w);
        est.rho[h - 1] = acc * inv_n;
    }
    est.cp_norm = cp_norm_from_signs(signs, w);
    return est;
}

double confidence_bound(std::size_t n, double cp_norm, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (n < 1) throw std::invalid_argument("sample size must be positive");
    return normal_quantile(1.0 - alpha / 2.0) * cp_norm / std::sqrt(static_cast<double>(n));
}

PortmanteauResult portmanteau(const SacfEstimate& estimate, std::size_t H) {
    if (H < 1 || H > estimate.max_lag()) throw std::invalid_argument("portmanteau H must lie in 1..max estimated lag");
    PortmanteauResult r;
    r.H = H;
    double acc = 0.0;
    for (std::size_t h = 0; h < H; ++h) acc += estimate.rho[h] * estimate.rho[h];
    r.statistic = static_cast<double>(estimate.n) * acc;
    const double scale = estimate.cp_norm * estimate.cp_norm;
    if (r.statistic == 0.0) {
        r.p_value = 1.0;
    } else if (!(scale > 0.0)) {
        r.p_value = 0.0;
    } else {
        r.p_value = chi2_sf(r.statistic / scale, static_cast<int>(H));
    }
    return r;
}

std::vector<double> facf(const FunctionalSeries& series, std::size_t H) {
    const auto n = series.size();
    if (H >= n) throw std::invalid_argument("maximum lag H must be smaller than the sample size");
    const auto w = series.grid().weights();
    const auto m = w.size();
    const Curve mean = sample_mean(series);

    // centered curves scaled by sqrt(w), so kernel HS norms become Frobenius norms
    std::vector<std::vector<double>> y(n, std::vector<double>(m));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) y[i][j] = (series[i][j] - mean[j]) * std::sqrt(w[j]);
    }

    double trace = 0.0;
    for (const auto& v : y) {
        for (double x : v) trace += x * x;
    }
    trace /= static_cast<double>(n);
    if (!(trace > 0.0)) throw DataError("fACF undefined: the series has zero variance");

    std::vector<double> out(H + 1);
    std::vector<double> c(m * m);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t h = 0; h <= H; ++h) {
        std::fill(c.begin(), c.end(), 0.0);
        for (std::size_t i = 0; i + h < n; ++i) {
            const auto& a = y[i];
            const auto& b = y[i + h];
            for (std::size_t j = 0; j < m; ++j) {
                const double aj = a[j];
                if (aj == 0.0) continue;
                double* row = c.data() + j * m;
                for (std::size_t k = 0; k < m; ++k) row[k] += aj * b[k];
            }
        }
        double acc = 0.0;
        for (double v : c) acc += v * v;
        out[h] = std::sqrt(acc) * inv_n / trace;
    }
    return out;
}

}  // namespace fsacf
