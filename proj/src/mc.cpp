#include "fsacf/mc.hpp"

#include "fsacf/distributions.hpp"
#include "fsacf/far.hpp"
#include "fsacf/sacf.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace fsacf::mc {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

void check_alphas(const std::vector<double>& alphas) {
    if (alphas.empty()) throw std::invalid_argument("at least one alpha is required");
    for (double a : alphas) {
        if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    }
}

void check_sizes(const std::vector<std::size_t>& values, const char* what) {
    if (values.empty()) throw std::invalid_argument(std::string("at least one ") + what + " is required");
}

std::size_t max_of(const std::vector<std::size_t>& v) { return v.empty() ? 0 : *std::max_element(v.begin(), v.end()); }

// Per-replication outcome of one coverage run: the estimate for each arm, or
// nothing when the median failed.
struct CoverageDraw {
    std::optional<SacfEstimate> estimated;
    std::optional<SacfEstimate> known;
};

}  // namespace

std::string to_string(CenterArm arm) { return arm == CenterArm::estimated ? "estimated" : "known_zero"; }

std::string to_string(Statistic stat) { return stat == Statistic::band ? "band" : "portmanteau"; }

std::string to_string(VarianceArm arm) {
    switch (arm) {
        case VarianceArm::normal_true: return "normal_true";
        case VarianceArm::t_true: return "t_true";
        case VarianceArm::normal_estimated: return "normal_estimated";
        case VarianceArm::t_estimated: return "t_estimated";
    }
    return "unknown";
}

CenterMode parse_center_mode(const std::string& text) {
    if (text == "estimated") return CenterMode::estimated;
    if (text == "known_zero" || text == "known") return CenterMode::known_zero;
    if (text == "both") return CenterMode::both;
    throw std::invalid_argument("unknown center mode '" + text + "' (expected estimated, known_zero or both)");
}

void ExperimentConfig::validate() const {
    process.validate();
    if (!process.is_white_noise()) throw std::invalid_argument("coverage study needs a white-noise process");
    if (replications < 1) throw std::invalid_argument("replications must be at least 1");
    check_alphas(alphas);
    check_sizes(n_list, "sample size");
    if (lags.empty() && H_list.empty()) throw std::invalid_argument("at least one lag or H is required");
    for (std::size_t h : lags) {
        if (h == 0) throw std::invalid_argument("lags must be positive");
    }
    for (std::size_t h : H_list) {
        if (h == 0) throw std::invalid_argument("portmanteau H must be positive");
    }
    const std::size_t top = std::max(max_of(lags), max_of(H_list));
    for (std::size_t n : n_list) {
        if (n <= top) throw std::invalid_argument("every sample size must exceed the largest lag");
    }
    if (center_mode != CenterMode::estimated && std::holds_alternative<sim::BSplineExp>(process.kind)) {
        throw std::invalid_argument("the spatial median of the B-spline exponential process is not known in closed form");
    }
    if (grid_points < 2) throw std::invalid_argument("grid needs at least 2 points");
    median.validate();
}

const CoverageCell& CoverageReport::find(std::size_t n, std::size_t lag, double alpha, CenterArm arm,
                                         Statistic statistic) const {
    for (const auto& c : cells) {
        if (c.n == n && c.lag == lag && close(c.alpha, alpha) && c.arm == arm && c.statistic == statistic) return c;
    }
    throw std::out_of_range("no such coverage cell");
}

CoverageReport coverage_study(const ExperimentConfig& config) {
    config.validate();
    const auto grid = Grid::uniform(config.grid_points);
    const std::size_t H = std::max(max_of(config.lags), max_of(config.H_list));
    const bool want_est = config.center_mode != CenterMode::known_zero;
    const bool want_known = config.center_mode != CenterMode::estimated;
    const Curve zero = Curve::zeros(grid);

    CoverageReport report;
    report.process = config.process.name();
    report.replications = config.replications;
    report.seed = config.seed.master;

    for (std::size_t k = 0; k < config.n_list.size(); ++k) {
        const std::size_t n = config.n_list[k];
        const auto draws = run_replications<CoverageDraw>(config.replications, config.threads, [&](std::size_t r) {
            auto stream = config.seed.stream(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(k));
            const auto series = sim::generate(config.process, n, grid, stream);
            CoverageDraw d;
            if (want_est) {
                try {
                    d.estimated = sacf(series, H, std::nullopt, config.median);
                } catch (const ConvergenceError&) {
                }
            }
            if (want_known) d.known = sacf(series, H, zero, config.median);
            return d;
        });

        std::vector<CenterArm> arms;
        if (want_est) arms.push_back(CenterArm::estimated);
        if (want_known) arms.push_back(CenterArm::known_zero);
        for (CenterArm arm : arms) {
            auto pick = [arm](const CoverageDraw& d) -> const std::optional<SacfEstimate>& {
                return arm == CenterArm::estimated ? d.estimated : d.known;
            };
            for (double alpha : config.alphas) {
                for (std::size_t h : config.lags) {
                    CoverageCell cell{n, Statistic::band, h, alpha, arm, {}, 0};
                    for (const auto& d : draws) {
                        const auto& est = pick(d);
                        if (!est) {
                            ++cell.errors;
                            continue;
                        }
                        ++cell.rate.trials;
                        if (std::abs(est->at(h)) > est->bound(alpha)) ++cell.rate.hits;
                    }
                    report.cells.push_back(cell);
                }
                for (std::size_t hh : config.H_list) {
                    CoverageCell cell{n, Statistic::portmanteau, hh, alpha, arm, {}, 0};
                    for (const auto& d : draws) {
                        const auto& est = pick(d);
                        if (!est) {
                            ++cell.errors;
                            continue;
                        }
                        ++cell.rate.trials;
                        if (portmanteau(*est, hh).p_value < alpha) ++cell.rate.hits;
                    }
                    report.cells.push_back(cell);
                }
            }
        }
    }
    return report;
}

const PowerCell& PowerReport::find(double S, std::size_t n, std::size_t H) const {
    for (const auto& c : cells) {
        if (close(c.S, S) && c.n == n && c.H == H) return c;
    }
    throw std::out_of_range("no such power cell");
}

PowerReport power_study(const PowerConfig& config) {
    if (config.replications < 1) throw std::invalid_argument("replications must be at least 1");
    check_alphas({config.alpha});
    check_sizes(config.n_list, "sample size");
    check_sizes(config.H_list, "H");
    if (config.S_grid.empty()) throw std::invalid_argument("at least one S is required");
    for (double s : config.S_grid) {
        if (!(s >= 0.0 && s < 1.0)) throw std::invalid_argument("S values must lie in [0, 1)");
    }
    const std::size_t H = max_of(config.H_list);
    for (std::size_t h : config.H_list) {
        if (h == 0) throw std::invalid_argument("portmanteau H must be positive");
    }
    for (std::size_t n : config.n_list) {
        if (n <= H) throw std::invalid_argument("every sample size must exceed the largest H");
    }
    config.median.validate();

    const auto grid = Grid::uniform(config.grid_points);
    PowerReport report;
    report.alpha = config.alpha;
    report.replications = config.replications;
    report.seed = config.seed.master;

    for (std::size_t si = 0; si < config.S_grid.size(); ++si) {
        sim::ProcessSpec spec{sim::Far1{config.S_grid[si], sim::BrownianBridge{}}, config.burn_in};
        for (std::size_t ni = 0; ni < config.n_list.size(); ++ni) {
            const std::size_t n = config.n_list[ni];
            const auto substream = static_cast<std::uint32_t>(si * config.n_list.size() + ni);
            const auto draws =
                run_replications<std::optional<SacfEstimate>>(config.replications, config.threads, [&](std::size_t r) {
                    auto stream = config.seed.stream(static_cast<std::uint32_t>(r), substream);
                    const auto series = sim::generate(spec, n, grid, stream);
                    try {
                        return std::optional<SacfEstimate>(sacf(series, H, std::nullopt, config.median));
                    } catch (const ConvergenceError&) {
                        return std::optional<SacfEstimate>();
                    }
                });
            for (std::size_t h : config.H_list) {
                PowerCell cell{config.S_grid[si], n, h, {}, 0};
                for (const auto& est : draws) {
                    if (!est) {
                        ++cell.errors;
                        continue;
                    }
                    ++cell.rate.trials;
                    if (portmanteau(*est, h).p_value < config.alpha) ++cell.rate.hits;
                }
                report.cells.push_back(cell);
            }
        }
    }
    return report;
}

double true_cp_norm_squared(double lambda1, double lambda2) {
    if (close(lambda1, 1.0) && close(lambda2, 1.0)) return 0.5;
    if (close(lambda1, 1.0) && close(lambda2, 2.0)) return 9.0 - 6.0 * std::sqrt(2.0);
    throw std::invalid_argument("closed-form sign covariance norm is only available for (1,1) and (1,2)");
}

const VarianceCell& VarianceReport::find(double lambda1, double lambda2, std::size_t n, std::size_t lag, double alpha,
                                         VarianceArm arm) const {
    for (const auto& c : cells) {
        if (close(c.lambda1, lambda1) && close(c.lambda2, lambda2) && c.n == n && c.lag == lag &&
            close(c.alpha, alpha) && c.arm == arm) {
            return c;
        }
    }
    throw std::out_of_range("no such variance cell");
}

VarianceReport variance_study(const VarianceConfig& config) {
    if (config.replications < 1) throw std::invalid_argument("replications must be at least 1");
    check_alphas(config.alphas);
    check_sizes(config.n_list, "sample size");
    check_sizes(config.lags, "lag");
    if (config.lambda_pairs.empty()) throw std::invalid_argument("at least one lambda pair is required");
    std::vector<double> true_norm;
    for (const auto& [l1, l2] : config.lambda_pairs) true_norm.push_back(std::sqrt(true_cp_norm_squared(l1, l2)));
    const std::size_t H = max_of(config.lags);
    for (std::size_t h : config.lags) {
        if (h == 0) throw std::invalid_argument("lags must be positive");
    }
    for (std::size_t n : config.n_list) {
        if (n <= H) throw std::invalid_argument("every sample size must exceed the largest lag");
    }
    config.median.validate();

    const auto grid = Grid::uniform(config.grid_points);
    VarianceReport report;
    report.replications = config.replications;
    report.seed = config.seed.master;
    constexpr VarianceArm arms[] = {VarianceArm::normal_true, VarianceArm::t_true, VarianceArm::normal_estimated,
                                    VarianceArm::t_estimated};

    for (std::size_t pi = 0; pi < config.lambda_pairs.size(); ++pi) {
        const auto [l1, l2] = config.lambda_pairs[pi];
        const sim::ProcessSpec spec{sim::TwoDimGaussian{l1, l2}};
        for (std::size_t ni = 0; ni < config.n_list.size(); ++ni) {
            const std::size_t n = config.n_list[ni];
            const auto substream = static_cast<std::uint32_t>(pi * config.n_list.size() + ni);
            const auto draws =
                run_replications<std::optional<SacfEstimate>>(config.replications, config.threads, [&](std::size_t r) {
                    auto stream = config.seed.stream(static_cast<std::uint32_t>(r), substream);
                    const auto series = sim::generate(spec, n, grid, stream);
                    try {
                        return std::optional<SacfEstimate>(sacf(series, H, std::nullopt, config.median));
                    } catch (const ConvergenceError&) {
                        return std::optional<SacfEstimate>();
                    }
                });
            const double sqrt_n = std::sqrt(static_cast<double>(n));
            for (double alpha : config.alphas) {
                const double zn = normal_quantile(1.0 - alpha / 2.0);
                const double zt = student_t_quantile(1.0 - alpha / 2.0, static_cast<double>(n - 1));
                for (std::size_t h : config.lags) {
                    for (VarianceArm arm : arms) {
                        VarianceCell cell{l1, l2, n, h, alpha, arm, {}, 0};
                        const bool use_t = arm == VarianceArm::t_true || arm == VarianceArm::t_estimated;
                        const bool use_true = arm == VarianceArm::normal_true || arm == VarianceArm::t_true;
                        for (const auto& est : draws) {
                            if (!est) {
                                ++cell.errors;
                                continue;
                            }
                            const double scale = use_true ? true_norm[pi] : est->cp_norm;
                            const double b = (use_t ? zt : zn) * scale / sqrt_n;
                            ++cell.rate.trials;
                            if (std::abs(est->at(h)) > b) ++cell.rate.hits;
                        }
                        report.cells.push_back(cell);
                    }
                }
            }
        }
    }
    return report;
}

MisfitReport misfit_study(const MisfitConfig& config) {
    if (config.replications < 1) throw std::invalid_argument("replications must be at least 1");
    check_alphas({config.alpha});
    if (config.H == 0) throw std::invalid_argument("portmanteau H must be positive");
    if (!(config.cpv > 0.0 && config.cpv < 1.0)) throw std::invalid_argument("cpv threshold must lie in (0, 1)");
    const sim::ProcessSpec spec{sim::Far2{config.S1, config.S2, sim::BrownianBridge{}}, config.burn_in};
    spec.validate();
    config.median.validate();
    if (config.n <= config.H + 2) throw std::invalid_argument("sample size too small for the residual test");

    const auto grid = Grid::uniform(config.grid_points);
    struct Outcome {
        bool ok = false;
        bool reject2 = false;
        bool reject1 = false;
    };
    const auto outcomes = run_replications<Outcome>(config.replications, config.threads, [&](std::size_t r) {
        auto stream = config.seed.stream(static_cast<std::uint32_t>(r));
        const auto series = sim::generate(spec, config.n, grid, stream);
        Outcome o;
        try {
            const auto rule = DimensionRule::cpv(config.cpv);
            const auto m2 = fit_fsar(series, {1, 2}, rule);
            const auto m1 = fit_fsar(series, {1}, rule);
            const auto res2 = fitted_and_residuals(m2, series).residuals;
            const auto res1 = fitted_and_residuals(m1, series).residuals;
            const auto e2 = sacf(res2, config.H, std::nullopt, config.median);
            const auto e1 = sacf(res1, config.H, std::nullopt, config.median);
            o.reject2 = portmanteau(e2, config.H).p_value < config.alpha;
            o.reject1 = portmanteau(e1, config.H).p_value < config.alpha;
            o.ok = true;
        } catch (const ConvergenceError&) {
        } catch (const linalg::SingularMatrixError&) {
        }
        return o;
    });

    MisfitReport report{config.S1, config.S2, config.n, config.H, config.alpha, {}, {}, 0};
    for (const auto& o : outcomes) {
        if (!o.ok) {
            ++report.errors;
            continue;
        }
        ++report.far2.trials;
        ++report.far1.trials;
        if (o.reject2) ++report.far2.hits;
        if (o.reject1) ++report.far1.hits;
    }
    return report;
}

}  // namespace fsacf::mc
