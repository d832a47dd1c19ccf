#include "cli.hpp"

#include "fsacf/config.hpp"
#include "fsacf/core.hpp"
#include "fsacf/far.hpp"
#include "fsacf/fpca.hpp"
#include "fsacf/io.hpp"
#include "fsacf/mc.hpp"
#include "fsacf/median.hpp"
#include "fsacf/sacf.hpp"
#include "fsacf/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

namespace fsacf::cli {

namespace {

using nlohmann::json;
using io::format_double;

struct Shared {
    std::string input;
    std::string output = "-";
    std::string format = "csv";
    double alpha = 0.05;
    std::size_t H = 20;
    std::vector<std::size_t> H_list;
    double cpv = 0.9;
    std::size_t components = 0;
    std::string center;
    double median_tol = 1e-8;
    std::size_t median_max_iter = 200;
    std::vector<std::size_t> lags{1};
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string config;
    std::string summary;
    std::size_t threads = 0;

    // simulate
    std::string process;
    std::size_t n = 0;
    std::size_t M = 101;
    double S = 0.0;
    double S1 = 0.0;
    double S2 = 0.0;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    std::size_t basis = 8;
    std::size_t burn_in = 100;
    std::uint32_t replication = 0;

    // transform
    std::string kind;
    std::size_t lag_points = 1;
};

const CLI::Validator kOpenUnit(
    [](std::string& s) -> std::string {
        try {
            const double v = std::stod(s);
            if (v > 0.0 && v < 1.0) return {};
        } catch (...) {
        }
        return "value " + s + " must lie strictly between 0 and 1";
    },
    "(0,1)");

MedianConfig median_config(const Shared& o) {
    MedianConfig m;
    m.tolerance = o.median_tol;
    m.max_iterations = o.median_max_iter;
    return m;
}

FunctionalSeries read_input(const Shared& o, std::istream& in) {
    if (o.input == "-") return io::read_curves(in);
    return io::read_curves_file(o.input);
}

void write_to(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
    if (path.empty() || path == "-") {
        body(out);
        out.flush();
        return;
    }
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
    body(file);
    if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

std::optional<Curve> read_center(const Shared& o, const FunctionalSeries& series) {
    if (o.center.empty()) return std::nullopt;
    const auto file = io::read_curves_file(o.center);
    if (file.size() != 1) {
        throw UsageError("--center: file must hold exactly one curve, found " + std::to_string(file.size()));
    }
    if (!(*file[0].grid_ptr() == *series[0].grid_ptr())) {
        throw UsageError("--center: curve grid differs from the input grid");
    }
    return Curve(series[0].grid_ptr(), std::vector<double>(file[0].values().begin(), file[0].values().end()));
}

void check_lag(std::size_t H, std::size_t n, const char* flag) {
    if (H == 0) throw UsageError(std::string(flag) + ": max lag must be at least 1");
    if (H >= n) {
        throw UsageError(std::string(flag) + ": max lag " + std::to_string(H) + " must be below the sample size " +
                         std::to_string(n));
    }
}

DimensionRule dimension_rule(const Shared& o) {
    return o.components > 0 ? DimensionRule::fixed(o.components) : DimensionRule::cpv(o.cpv);
}

json estimate_json(const SacfEstimate& est, double alpha) {
    const auto pt = portmanteau(est, est.max_lag());
    return json{{"n", est.n},
                {"H", est.max_lag()},
                {"cp_norm", est.cp_norm},
                {"rho", est.rho},
                {"alpha", alpha},
                {"bound", est.bound(alpha)},
                {"Q", pt.statistic},
                {"p", pt.p_value},
                {"center", est.centered_by == CenterSource::supplied_center ? "supplied" : "estimated"}};
}

int cmd_sacf(const Shared& o, std::istream& in, std::ostream& out) {
    const auto series = read_input(o, in);
    check_lag(o.H, series.size(), "--lags");
    const auto center = read_center(o, series);
    const auto est = sacf(series, o.H, center, median_config(o));
    const double b = est.bound(o.alpha);
    write_to(o.output, out, [&](std::ostream& s) {
        if (o.format == "json") {
            s << estimate_json(est, o.alpha).dump() << '\n';
            return;
        }
        s << "lag,rho,lower,upper\n";
        for (std::size_t h = 1; h <= est.max_lag(); ++h) {
            s << h << ',' << format_double(est.at(h)) << ',' << format_double(-b) << ',' << format_double(b) << '\n';
        }
    });
    return 0;
}

int cmd_facf(const Shared& o, std::istream& in, std::ostream& out) {
    const auto series = read_input(o, in);
    check_lag(o.H, series.size(), "--lags");
    const auto values = facf(series, o.H);
    write_to(o.output, out, [&](std::ostream& s) {
        if (o.format == "json") {
            const std::vector<double> rho(values.begin() + 1, values.end());
            s << json{{"n", series.size()}, {"H", o.H}, {"rho", rho}, {"lower", nullptr}, {"upper", nullptr}}.dump()
              << '\n';
            return;
        }
        s << "lag,rho,lower,upper\n";
        for (std::size_t h = 1; h <= o.H; ++h) s << h << ',' << format_double(values[h]) << ",,\n";
    });
    return 0;
}

int cmd_test(const Shared& o, std::istream& in, std::ostream& out) {
    const auto series = read_input(o, in);
    auto Hs = o.H_list.empty() ? std::vector<std::size_t>{o.H} : o.H_list;
    std::size_t top = 0;
    for (std::size_t H : Hs) {
        check_lag(H, series.size(), "--lags");
        top = std::max(top, H);
    }
    const auto center = read_center(o, series);
    const auto est = sacf(series, top, center, median_config(o));
    std::vector<PortmanteauResult> results;
    for (std::size_t H : Hs) results.push_back(portmanteau(est, H));
    write_to(o.output, out, [&](std::ostream& s) {
        if (o.format == "json") {
            json tests = json::array();
            for (const auto& r : results) tests.push_back({{"H", r.H}, {"Q", r.statistic}, {"p", r.p_value}});
            s << json{{"n", est.n}, {"cp_norm", est.cp_norm}, {"alpha", o.alpha}, {"tests", tests}}.dump() << '\n';
            return;
        }
        s << "H,Q,p,reject\n";
        for (const auto& r : results) {
            s << r.H << ',' << format_double(r.statistic) << ',' << format_double(r.p_value) << ','
              << (r.p_value < o.alpha ? 1 : 0) << '\n';
        }
    });
    return 0;
}

int cmd_median(const Shared& o, std::istream& in, std::ostream& out) {
    const auto series = read_input(o, in);
    const auto result = spatial_median_detailed(series, median_config(o));
    write_to(o.output, out, [&](std::ostream& s) {
        if (o.format == "json") {
            const auto t = result.center.grid().points();
            s << json{{"t", std::vector<double>(t.begin(), t.end())},
                      {"median", std::vector<double>(result.center.values().begin(), result.center.values().end())},
                      {"iterations", result.iterations},
                      {"objective", result.objective_history.back()}}
                     .dump()
              << '\n';
            return;
        }
        io::write_curve(s, result.center);
    });
    return 0;
}

int cmd_fpca(const Shared& o, std::istream& in, std::ostream& out) {
    if (o.output.empty() || o.output == "-") throw UsageError("--output: fpca needs a file prefix");
    const auto series = read_input(o, in);
    const auto result = fpca(series);
    const std::size_t J =
        o.components > 0 ? std::min(o.components, result.components()) : select_cpv(result.eigenvalues, o.cpv);
    write_to(o.output + "_eigenvalues.csv", out, [&](std::ostream& s) {
        s << "component,eigenvalue,cpv\n";
        for (std::size_t k = 0; k < result.components(); ++k) {
            s << k + 1 << ',' << format_double(result.eigenvalues[k]) << ',' << format_double(result.cpv[k]) << '\n';
        }
    });
    write_to(o.output + "_eigenfunctions.csv", out, [&](std::ostream& s) {
        std::vector<Curve> v(result.eigenfunctions.begin(), result.eigenfunctions.begin() + J);
        io::write_curves(s, FunctionalSeries(series[0].grid_ptr(), std::move(v)));
    });
    write_to(o.output + "_scores.csv", out, [&](std::ostream& s) {
        s << "i";
        for (std::size_t k = 0; k < J; ++k) s << ",xi_" << k + 1;
        s << '\n';
        for (std::size_t i = 0; i < series.size(); ++i) {
            s << i + 1;
            for (std::size_t k = 0; k < J; ++k) s << ',' << format_double(result.scores(i, k));
            s << '\n';
        }
    });
    const std::vector<double> head(result.eigenvalues.begin(), result.eigenvalues.begin() + J);
    out << json{{"n", series.size()}, {"M", series[0].grid().size()}, {"components", J}, {"eigenvalues", head},
                {"cpv", result.cpv[J - 1]}}
               .dump()
        << '\n';
    return 0;
}

json model_json(const FarModel& model) {
    json blocks = json::array();
    for (std::size_t b = 0; b < model.lags.size(); ++b) {
        const auto m = model.block(b);
        json rows = json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) {
            std::vector<double> row(m.cols());
            for (std::size_t j = 0; j < m.cols(); ++j) row[j] = m(i, j);
            rows.push_back(row);
        }
        blocks.push_back({{"lag", model.lags[b]}, {"Phi", rows}, {"kernel_hs_norm", model.kernel(b).norm()}});
    }
    return json{{"n", model.training_size},
                {"lags", model.lags},
                {"dimension", model.dimension},
                {"eigenvalues", model.eigenvalues},
                {"coefficients", blocks}};
}

FarModel fit_from_flags(const Shared& o, const FunctionalSeries& series) {
    for (std::size_t l : o.lags) {
        if (l == 0) throw UsageError("--lags: model lags must be positive");
    }
    return fit_fsar(series, o.lags, dimension_rule(o));
}

int cmd_fit(const Shared& o, std::istream& in, std::ostream& out) {
    const auto series = read_input(o, in);
    const auto model = fit_from_flags(o, series);
    write_to(o.output, out, [&](std::ostream& s) { s << model_json(model).dump() << '\n'; });
    return 0;
}

int cmd_residuals(const Shared& o, std::istream& in, std::ostream& out) {
    const auto series = read_input(o, in);
    const auto model = fit_from_flags(o, series);
    const auto fit = fitted_and_residuals(model, series);
    write_to(o.output, out, [&](std::ostream& s) { io::write_curves(s, fit.residuals); });
    return 0;
}

sim::NoiseSpec noise_from(const sim::ProcessSpec& base, const Shared& o) {
    sim::NoiseSpec noise = sim::BrownianBridge{};
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (!std::is_same_v<K, sim::Far1> && !std::is_same_v<K, sim::Far2>) noise = k;
        },
        base.kind);
    if (auto* b = std::get_if<sim::BSplineExp>(&noise)) b->basis_count = o.basis;
    if (auto* g = std::get_if<sim::TwoDimGaussian>(&noise)) *g = {o.lambda1, o.lambda2};
    return noise;
}

sim::ProcessSpec process_from(const std::string& name, const Shared& o, const std::string& innovation) {
    sim::ProcessSpec spec;
    try {
        spec = sim::parse_process(name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--process: ") + e.what());
    }
    spec.burn_in = o.burn_in;
    sim::NoiseSpec innov = sim::BrownianBridge{};
    if (!innovation.empty()) {
        try {
            innov = noise_from(sim::parse_process(innovation), o);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("--innovation: ") + e.what());
        }
    }
    if (auto* f = std::get_if<sim::Far1>(&spec.kind)) {
        *f = {o.S, innov};
    } else if (auto* f2 = std::get_if<sim::Far2>(&spec.kind)) {
        *f2 = {o.S1, o.S2, innov};
    } else {
        spec.kind = std::visit([](const auto& k) -> decltype(spec.kind) { return k; }, noise_from(spec, o));
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--process: ") + e.what());
    }
    return spec;
}

int cmd_simulate(const Shared& o, const std::string& innovation, std::ostream& out) {
    if (o.n < 1) throw UsageError("--n: sample size must be positive");
    if (o.M < 2) throw UsageError("--M: grid needs at least 2 points");
    const auto spec = process_from(o.process, o, innovation);
    const auto grid = Grid::uniform(o.M);
    const auto series = sim::generate(spec, o.n, grid, Seed{o.seed}, o.replication);
    write_to(o.output, out, [&](std::ostream& s) { io::write_curves(s, series); });
    return 0;
}

int cmd_transform(const Shared& o, std::istream& in, std::ostream& out) {
    const auto series = read_input(o, in);
    FunctionalSeries result = [&] {
        if (o.kind == "difference") return pointwise_difference(series);
        if (o.kind == "log-return") return intraday_transform(series, IntradayKind::log_return, o.lag_points);
        if (o.kind == "cidr") return intraday_transform(series, IntradayKind::cidr);
        return intraday_transform(series, IntradayKind::square);
    }();
    write_to(o.output, out, [&](std::ostream& s) { io::write_curves(s, result); });
    return 0;
}

// ---- Monte Carlo commands ----

const std::set<std::string> kMedianKeys{"median_tolerance", "median_max_iterations"};

std::set<std::string> with_common(std::set<std::string> keys) {
    keys.insert(kMedianKeys.begin(), kMedianKeys.end());
    keys.insert({"replications", "seed", "M", "threads"});
    return keys;
}

MedianConfig median_from(const KeyValueConfig& c) {
    MedianConfig m;
    m.tolerance = c.get_double("median_tolerance", m.tolerance);
    m.max_iterations = c.get_size("median_max_iterations", m.max_iterations);
    return m;
}

void emit_mc(const Shared& o, std::ostream& out, const std::string& header,
             const std::vector<std::vector<std::string>>& rows, const json& summary) {
    write_to(o.output, out, [&](std::ostream& s) {
        if (o.format == "json") {
            s << summary.dump(2) << '\n';
            return;
        }
        s << header << '\n';
        for (const auto& row : rows) {
            for (std::size_t k = 0; k < row.size(); ++k) s << (k ? "," : "") << row[k];
            s << '\n';
        }
    });
    if (!o.summary.empty()) write_to(o.summary, out, [&](std::ostream& s) { s << summary.dump(2) << '\n'; });
}

std::vector<std::string> rate_fields(const mc::Rate& r, std::size_t errors) {
    return {format_double(r.value()), format_double(r.standard_error()), std::to_string(r.hits),
            std::to_string(r.trials), std::to_string(errors)};
}

json rate_json(const mc::Rate& r, std::size_t errors) {
    return json{{"rate", r.value()}, {"se", r.standard_error()}, {"hits", r.hits}, {"trials", r.trials},
                {"errors", errors}};
}

template <typename Fn>
auto guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw UsageError(std::string("--config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--config: ") + e.what());
    }
}

int cmd_mc_coverage(const Shared& o, std::ostream& out) {
    const auto c = guarded([&] { return KeyValueConfig::parse_file(o.config); });
    const auto cfg = guarded([&] {
        c.require_known(with_common({"process", "n", "alpha", "lags", "H", "center", "basis", "lambda1", "lambda2"}));
        mc::ExperimentConfig cfg;
        Shared p = o;
        p.basis = c.get_size("basis", 8);
        p.lambda1 = c.get_double("lambda1", 1.0);
        p.lambda2 = c.get_double("lambda2", 1.0);
        cfg.process = sim::parse_process(c.get_string("process", "bb"));
        cfg.process.kind = std::visit([](const auto& k) -> decltype(cfg.process.kind) { return k; },
                                      noise_from(cfg.process, p));
        cfg.n_list = c.get_sizes("n", cfg.n_list);
        cfg.alphas = c.get_doubles("alpha", cfg.alphas);
        cfg.lags = c.get_sizes("lags", cfg.lags);
        cfg.H_list = c.get_sizes("H", cfg.H_list);
        cfg.replications = c.get_size("replications", cfg.replications);
        cfg.seed.master = o.seed_given ? o.seed : c.get_u64("seed", 0);
        cfg.center_mode = mc::parse_center_mode(c.get_string("center", "estimated"));
        cfg.grid_points = c.get_size("M", cfg.grid_points);
        cfg.median = median_from(c);
        cfg.threads = o.threads ? o.threads : c.get_size("threads", 0);
        cfg.validate();
        return cfg;
    });
    const auto report = mc::coverage_study(cfg);
    std::vector<std::vector<std::string>> rows;
    json cells = json::array();
    for (const auto& cell : report.cells) {
        std::vector<std::string> row{report.process,      std::to_string(cell.n),  mc::to_string(cell.statistic),
                                     std::to_string(cell.lag), format_double(cell.alpha), mc::to_string(cell.arm)};
        const auto rf = rate_fields(cell.rate, cell.errors);
        row.insert(row.end(), rf.begin(), rf.end());
        rows.push_back(row);
        auto j = rate_json(cell.rate, cell.errors);
        j.update({{"n", cell.n}, {"statistic", mc::to_string(cell.statistic)}, {"lag", cell.lag},
                  {"alpha", cell.alpha}, {"center", mc::to_string(cell.arm)}});
        cells.push_back(j);
    }
    const json summary{{"command", "mc-coverage"},
                       {"config", {{"process", report.process}, {"n", cfg.n_list}, {"alpha", cfg.alphas},
                                   {"lags", cfg.lags}, {"H", cfg.H_list}, {"replications", cfg.replications},
                                   {"seed", cfg.seed.master}, {"M", cfg.grid_points}}},
                       {"cells", cells}};
    emit_mc(o, out, "process,n,statistic,lag,alpha,center,rate,se,hits,trials,errors", rows, summary);
    return 0;
}

int cmd_mc_power(const Shared& o, std::ostream& out) {
    const auto c = guarded([&] { return KeyValueConfig::parse_file(o.config); });
    const auto cfg = guarded([&] {
        c.require_known(with_common({"S", "n", "H", "alpha", "burn_in"}));
        mc::PowerConfig cfg;
        cfg.S_grid = c.get_doubles("S", cfg.S_grid);
        cfg.n_list = c.get_sizes("n", cfg.n_list);
        cfg.H_list = c.get_sizes("H", cfg.H_list);
        cfg.alpha = c.get_double("alpha", cfg.alpha);
        cfg.replications = c.get_size("replications", cfg.replications);
        cfg.seed.master = o.seed_given ? o.seed : c.get_u64("seed", 0);
        cfg.grid_points = c.get_size("M", cfg.grid_points);
        cfg.burn_in = c.get_size("burn_in", cfg.burn_in);
        cfg.median = median_from(c);
        cfg.threads = o.threads ? o.threads : c.get_size("threads", 0);
        return cfg;
    });
    const auto report = guarded([&] { return mc::power_study(cfg); });
    std::vector<std::vector<std::string>> rows;
    json cells = json::array();
    for (const auto& cell : report.cells) {
        std::vector<std::string> row{format_double(cell.S), std::to_string(cell.n), std::to_string(cell.H)};
        const auto rf = rate_fields(cell.rate, cell.errors);
        row.insert(row.end(), rf.begin(), rf.end());
        rows.push_back(row);
        auto j = rate_json(cell.rate, cell.errors);
        j.update({{"S", cell.S}, {"n", cell.n}, {"H", cell.H}});
        cells.push_back(j);
    }
    const json summary{{"command", "mc-power"},
                       {"config", {{"S", cfg.S_grid}, {"n", cfg.n_list}, {"H", cfg.H_list}, {"alpha", cfg.alpha},
                                   {"replications", cfg.replications}, {"seed", cfg.seed.master},
                                   {"M", cfg.grid_points}}},
                       {"cells", cells}};
    emit_mc(o, out, "S,n,H,rate,se,hits,trials,errors", rows, summary);
    return 0;
}

int cmd_mc_variance(const Shared& o, std::ostream& out) {
    const auto c = guarded([&] { return KeyValueConfig::parse_file(o.config); });
    const auto cfg = guarded([&] {
        c.require_known(with_common({"lambda_pairs", "n", "alpha", "lags"}));
        mc::VarianceConfig cfg;
        if (c.has("lambda_pairs")) {
            cfg.lambda_pairs.clear();
            for (const auto& item : c.get_list("lambda_pairs")) {
                const auto colon = item.find(':');
                if (colon == std::string::npos) throw ConfigError("lambda_pairs items look like 1:2, got '" + item + "'");
                const auto number = [&](const std::string& text) {
                    std::size_t used = 0;
                    double value = 0.0;
                    try {
                        value = std::stod(text, &used);
                    } catch (const std::exception&) {
                        used = 0;
                    }
                    if (used == 0 || used != text.size()) {
                        throw ConfigError("lambda_pairs items look like 1:2, got '" + item + "'");
                    }
                    return value;
                };
                cfg.lambda_pairs.emplace_back(number(item.substr(0, colon)), number(item.substr(colon + 1)));
            }
        }
        cfg.n_list = c.get_sizes("n", cfg.n_list);
        cfg.alphas = c.get_doubles("alpha", cfg.alphas);
        cfg.lags = c.get_sizes("lags", cfg.lags);
        cfg.replications = c.get_size("replications", cfg.replications);
        cfg.seed.master = o.seed_given ? o.seed : c.get_u64("seed", 0);
        cfg.grid_points = c.get_size("M", cfg.grid_points);
        cfg.median = median_from(c);
        cfg.threads = o.threads ? o.threads : c.get_size("threads", 0);
        return cfg;
    });
    const auto report = guarded([&] { return mc::variance_study(cfg); });
    std::vector<std::vector<std::string>> rows;
    json cells = json::array();
    for (const auto& cell : report.cells) {
        std::vector<std::string> row{format_double(cell.lambda1), format_double(cell.lambda2), std::to_string(cell.n),
                                     std::to_string(cell.lag),    format_double(cell.alpha),   mc::to_string(cell.arm)};
        const auto rf = rate_fields(cell.rate, cell.errors);
        row.insert(row.end(), rf.begin(), rf.end());
        rows.push_back(row);
        auto j = rate_json(cell.rate, cell.errors);
        j.update({{"lambda1", cell.lambda1}, {"lambda2", cell.lambda2}, {"n", cell.n}, {"lag", cell.lag},
                  {"alpha", cell.alpha}, {"arm", mc::to_string(cell.arm)}});
        cells.push_back(j);
    }
    const json summary{{"command", "mc-variance"},
                       {"config", {{"lambda_pairs", cfg.lambda_pairs}, {"n", cfg.n_list}, {"alpha", cfg.alphas},
                                   {"lags", cfg.lags}, {"replications", cfg.replications}, {"seed", cfg.seed.master},
                                   {"M", cfg.grid_points}}},
                       {"cells", cells}};
    emit_mc(o, out, "lambda1,lambda2,n,lag,alpha,arm,rate,se,hits,trials,errors", rows, summary);
    return 0;
}

int cmd_mc_misfit(const Shared& o, std::ostream& out) {
    const auto c = guarded([&] { return KeyValueConfig::parse_file(o.config); });
    const auto cfg = guarded([&] {
        c.require_known(with_common({"S1", "S2", "n", "H", "alpha", "cpv", "burn_in"}));
        mc::MisfitConfig cfg;
        cfg.S1 = c.get_double("S1", cfg.S1);
        cfg.S2 = c.get_double("S2", cfg.S2);
        cfg.n = c.get_size("n", cfg.n);
        cfg.H = c.get_size("H", cfg.H);
        cfg.alpha = c.get_double("alpha", cfg.alpha);
        cfg.cpv = c.get_double("cpv", cfg.cpv);
        cfg.replications = c.get_size("replications", cfg.replications);
        cfg.seed.master = o.seed_given ? o.seed : c.get_u64("seed", 0);
        cfg.grid_points = c.get_size("M", cfg.grid_points);
        cfg.burn_in = c.get_size("burn_in", cfg.burn_in);
        cfg.median = median_from(c);
        cfg.threads = o.threads ? o.threads : c.get_size("threads", 0);
        return cfg;
    });
    const auto r = guarded([&] { return mc::misfit_study(cfg); });
    std::vector<std::vector<std::string>> rows;
    for (const auto& [label, rate] : {std::pair{"FAR2", r.far2}, std::pair{"FAR1", r.far1}}) {
        std::vector<std::string> row{label, format_double(r.S1), format_double(r.S2), std::to_string(r.n),
                                     std::to_string(r.H)};
        const auto rf = rate_fields(rate, r.errors);
        row.insert(row.end(), rf.begin(), rf.end());
        rows.push_back(row);
    }
    const json summary{{"command", "mc-misfit"},
                       {"config", {{"S1", cfg.S1}, {"S2", cfg.S2}, {"n", cfg.n}, {"H", cfg.H}, {"alpha", cfg.alpha},
                                   {"cpv", cfg.cpv}, {"replications", cfg.replications}, {"seed", cfg.seed.master},
                                   {"M", cfg.grid_points}}},
                       {"far2_fit", rate_json(r.far2, r.errors)},
                       {"far1_fit", rate_json(r.far1, r.errors)}};
    emit_mc(o, out, "fitted,S1,S2,n,H,rate,se,hits,trials,errors", rows, summary);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robust autocorrelation analysis for functional time series", "fsacf"};
    app.require_subcommand(1, 1);
    Shared o;
    std::string innovation;

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("-i,--input", o.input, "Curve CSV file, '-' for stdin")->required();
    };
    auto add_output = [&](CLI::App* sub, const std::string& what) {
        sub->add_option("-o,--output", o.output, what)->capture_default_str();
    };
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    };
    auto add_median = [&](CLI::App* sub) {
        sub->add_option("--median-tol", o.median_tol, "Weiszfeld relative tolerance")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--median-max-iter", o.median_max_iter, "Weiszfeld iteration cap")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    };
    auto add_alpha = [&](CLI::App* sub) {
        sub->add_option("--alpha", o.alpha, "Significance level")->check(kOpenUnit)->capture_default_str();
    };
    auto add_dimension = [&](CLI::App* sub) {
        sub->add_option("--cpv", o.cpv, "Variance share selecting the FPC count")
            ->check(kOpenUnit)
            ->capture_default_str();
        sub->add_option("--components", o.components, "Fixed FPC count (overrides --cpv)")
            ->check(CLI::PositiveNumber);
    };

    auto* sacf_cmd = app.add_subcommand("sacf", "Spherical autocorrelation with white-noise bands");
    add_input(sacf_cmd);
    add_output(sacf_cmd, "Output path, '-' for stdout");
    add_format(sacf_cmd);
    add_alpha(sacf_cmd);
    add_median(sacf_cmd);
    sacf_cmd->add_option("-H,--lags", o.H, "Maximum lag")->capture_default_str();
    sacf_cmd->add_option("--center", o.center, "Known center curve CSV (one curve)");

    auto* facf_cmd = app.add_subcommand("facf", "Classical functional autocorrelation");
    add_input(facf_cmd);
    add_output(facf_cmd, "Output path, '-' for stdout");
    add_format(facf_cmd);
    facf_cmd->add_option("-H,--lags", o.H, "Maximum lag")->capture_default_str();

    auto* test_cmd = app.add_subcommand("test", "Portmanteau white-noise test");
    add_input(test_cmd);
    add_output(test_cmd, "Output path, '-' for stdout");
    add_format(test_cmd);
    add_alpha(test_cmd);
    add_median(test_cmd);
    test_cmd->add_option("-H,--lags", o.H_list, "Maximum lag(s), comma separated")->delimiter(',');
    test_cmd->add_option("--center", o.center, "Known center curve CSV (one curve)");

    auto* median_cmd = app.add_subcommand("median", "Functional spatial median");
    add_input(median_cmd);
    add_output(median_cmd, "Output path, '-' for stdout");
    add_format(median_cmd);
    add_median(median_cmd);

    auto* fpca_cmd = app.add_subcommand("fpca", "Functional principal components");
    add_input(fpca_cmd);
    fpca_cmd->add_option("-o,--output", o.output, "Prefix for the three output files")->required();
    add_dimension(fpca_cmd);

    auto* fit_cmd = app.add_subcommand("fit-fsar", "Fit a functional (seasonal) autoregression");
    add_input(fit_cmd);
    add_output(fit_cmd, "Model summary JSON path, '-' for stdout");
    add_dimension(fit_cmd);
    fit_cmd->add_option("--lags", o.lags, "Model lags, comma separated")->delimiter(',')->capture_default_str();

    auto* res_cmd = app.add_subcommand("residuals", "Residual curves of a fitted autoregression");
    add_input(res_cmd);
    add_output(res_cmd, "Residual curve CSV path, '-' for stdout");
    add_dimension(res_cmd);
    res_cmd->add_option("--lags", o.lags, "Model lags, comma separated")->delimiter(',')->capture_default_str();

    auto* sim_cmd = app.add_subcommand("simulate", "Simulate a functional time series");
    add_output(sim_cmd, "Curve CSV path, '-' for stdout");
    sim_cmd->add_option("--process", o.process, "bm, bb, fourier-cauchy, bspline-exp, two-dim-gaussian, far1, far2")
        ->required();
    sim_cmd->add_option("--n", o.n, "Number of curves")->required();
    sim_cmd->add_option("--M", o.M, "Grid points on [0,1]")->capture_default_str();
    sim_cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
    sim_cmd->add_option("--replication", o.replication, "Replication stream index")->capture_default_str();
    sim_cmd->add_option("--S", o.S, "FAR(1) kernel norm");
    sim_cmd->add_option("--S1", o.S1, "FAR(2) lag-1 kernel norm");
    sim_cmd->add_option("--S2", o.S2, "FAR(2) lag-2 kernel norm");
    sim_cmd->add_option("--innovation", innovation, "Innovation process for far1/far2 (default bb)");
    sim_cmd->add_option("--lambda1", o.lambda1, "two-dim-gaussian first variance")->capture_default_str();
    sim_cmd->add_option("--lambda2", o.lambda2, "two-dim-gaussian second variance")->capture_default_str();
    sim_cmd->add_option("--basis", o.basis, "bspline-exp basis size")->capture_default_str();
    sim_cmd->add_option("--burn-in", o.burn_in, "Discarded leading curves (far1/far2)")->capture_default_str();

    auto* tr_cmd = app.add_subcommand("transform", "Intraday transforms of price curves");
    add_input(tr_cmd);
    add_output(tr_cmd, "Curve CSV path, '-' for stdout");
    tr_cmd->add_option("--kind", o.kind, "Transform")
        ->required()
        ->check(CLI::IsMember({"log-return", "cidr", "square", "difference"}));
    tr_cmd->add_option("--lag-points", o.lag_points, "Grid lag for log-return")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    std::vector<CLI::App*> mc_cmds;
    for (const auto& [name, help] : {std::pair{"mc-coverage", "Coverage of the white-noise band"},
                                     std::pair{"mc-power", "Portmanteau power on FAR(1) data"},
                                     std::pair{"mc-variance", "Sign-covariance norm estimator comparison"},
                                     std::pair{"mc-misfit", "Residual diagnosis of FAR(1) vs FAR(2) fits"}}) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("-c,--config", o.config, "key = value experiment file")->required();
        add_output(sub, "Cell table path, '-' for stdout");
        add_format(sub);
        sub->add_option("--summary", o.summary, "Also write the JSON summary here");
        sub->add_option("--seed", o.seed, "Override the config seed");
        sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
        mc_cmds.push_back(sub);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        for (auto* sub : mc_cmds) {
            if (sub->parsed()) o.seed_given = sub->count("--seed") > 0;
        }
        if (test_cmd->parsed() && o.H_list.empty()) o.H_list = {o.H};
        if (sacf_cmd->parsed()) return cmd_sacf(o, in, out);
        if (facf_cmd->parsed()) return cmd_facf(o, in, out);
        if (test_cmd->parsed()) return cmd_test(o, in, out);
        if (median_cmd->parsed()) return cmd_median(o, in, out);
        if (fpca_cmd->parsed()) return cmd_fpca(o, in, out);
        if (fit_cmd->parsed()) return cmd_fit(o, in, out);
        if (res_cmd->parsed()) return cmd_residuals(o, in, out);
        if (sim_cmd->parsed()) return cmd_simulate(o, innovation, out);
        if (tr_cmd->parsed()) return cmd_transform(o, in, out);
        if (mc_cmds[0]->parsed()) return cmd_mc_coverage(o, out);
        if (mc_cmds[1]->parsed()) return cmd_mc_power(o, out);
        if (mc_cmds[2]->parsed()) return cmd_mc_variance(o, out);
        if (mc_cmds[3]->parsed()) return cmd_mc_misfit(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const io::CsvError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

int run(int argc, char** argv, std::istream& in, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, in, out, err);
}

}  // namespace fsacf::cli
