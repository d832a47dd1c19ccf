#include "fsacf/simulate.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fsacf::sim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate_noise(const NoiseSpec& noise) {
    std::visit(overloaded{[](const BSplineExp& b) {
                              if (b.basis_count < 4) throw std::invalid_argument("cubic B-spline basis needs K >= 4");
                          },
                          [](const TwoDimGaussian& g) {
                              if (!(g.lambda1 > 0.0) || !(g.lambda2 > 0.0)) {
                                  throw std::invalid_argument("two-dimensional Gaussian needs positive lambdas");
                              }
                          },
                          [](const auto&) {}},
               noise);
}

void validate_scale(double s, const char* name) {
    if (!(std::abs(s) <= 1.0)) {
        std::ostringstream os;
        os << "kernel scale " << name << " = " << s << " must satisfy |S| <= 1";
        throw std::invalid_argument(os.str());
    }
}

std::string noise_name(const NoiseSpec& noise) {
    return std::visit(overloaded{[](const BrownianMotion&) { return std::string("BM"); },
                                 [](const BrownianBridge&) { return std::string("BB"); },
                                 [](const FourierCauchy&) { return std::string("FourierCauchy"); },
                                 [](const BSplineExp& b) { return "BSplineExp(K=" + std::to_string(b.basis_count) + ")"; },
                                 [](const TwoDimGaussian& g) {
                                     std::ostringstream os;
                                     os << "TwoDimGaussian(" << g.lambda1 << "," << g.lambda2 << ")";
                                     return os.str();
                                 }},
                      noise);
}

/// Draws iid curves of one white-noise family on a fixed grid.
class NoiseSampler {
public:
    NoiseSampler(const NoiseSpec& spec, GridPtr grid) : spec_(spec), grid_(std::move(grid)) {
        if (const auto* b = std::get_if<BSplineExp>(&spec_)) basis_ = orthonormal_bsplines(b->basis_count, grid_);
    }

    Curve draw(RandomStream& rng) const {
        const auto m = grid_->size();
        const auto t = grid_->points();
        std::vector<double> v(m, 0.0);
        std::visit(overloaded{[&](const BrownianMotion&) { brownian(rng, v); },
                              [&](const BrownianBridge&) {
                                  const double w1 = brownian(rng, v);
                                  for (std::size_t j = 0; j < m; ++j) v[j] -= t[j] * w1;
                              },
                              [&](const FourierCauchy&) {
                                  double z[7];
                                  for (double& x : z) x = rng.cauchy();
                                  for (std::size_t j = 0; j < m; ++j) {
                                      double acc = z[0];
                                      for (int k = 1; k <= 3; ++k) {
                                          const double arg = 2.0 * std::numbers::pi * k * t[j];
                                          acc += z[2 * k - 1] * std::cos(arg) + z[2 * k] * std::sin(arg);
                                      }
                                      v[j] = acc;
                                  }
                              },
                              [&](const BSplineExp&) {
                                  for (const auto& b : basis_) {
                                      const double e = rng.exponential();
                                      for (std::size_t j = 0; j < m; ++j) v[j] += e * b[j];
                                  }
                              },
                              [&](const TwoDimGaussian& g) {
                                  const double a = std::sqrt(2.0 * g.lambda1) * rng.normal();
                                  const double b = std::sqrt(2.0 * g.lambda2) * rng.normal();
                                  for (std::size_t j = 0; j < m; ++j) {
                                      const double arg = 2.0 * std::numbers::pi * t[j];
                                      v[j] = a * std::sin(arg) + b * std::cos(arg);
                                  }
                              }},
                   spec_);
        return Curve(grid_, std::move(v));
    }

private:
    // Fills v with W(t_j) and returns W(1).
    double brownian(RandomStream& rng, std::vector<double>& v) const {
        const auto w = grid_->weights();
        double acc = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            acc += std::sqrt(w[j]) * rng.normal();
            v[j] = acc;
        }
        const double last = grid_->points().back();
        if (last < 1.0) return acc + std::sqrt(1.0 - last) * rng.normal();
        return acc;
    }

    NoiseSpec spec_;
    GridPtr grid_;
    std::vector<Curve> basis_;
};

/// Cox-de Boor evaluation of all cubic basis functions at t.
std::vector<double> bspline_values(const std::vector<double>& knots, std::size_t count, double t) {
    constexpr std::size_t degree = 3;
    const std::size_t intervals = knots.size() - 1;
    std::vector<double> n0(intervals, 0.0);
    // the right end belongs to the last nonempty knot span
    std::size_t span = intervals;
    for (std::size_t i = 0; i < intervals; ++i) {
        if (knots[i] < knots[i + 1] && t >= knots[i] && t < knots[i + 1]) span = i;
    }
    if (span == intervals) {
        for (std::size_t i = intervals; i-- > 0;) {
            if (knots[i] < knots[i + 1]) {
                span = i;
                break;
            }
        }
    }
    n0[span] = 1.0;
    std::vector<double> cur = n0;
    for (std::size_t p = 1; p <= degree; ++p) {
        std::vector<double> next(intervals - p, 0.0);
        for (std::size_t i = 0; i + p < intervals; ++i) {
            double a = 0.0;
            const double d1 = knots[i + p] - knots[i];
            if (d1 > 0.0) a = (t - knots[i]) / d1 * cur[i];
            double b = 0.0;
            const double d2 = knots[i + p + 1] - knots[i + 1];
            if (d2 > 0.0) b = (knots[i + p + 1] - t) / d2 * cur[i + 1];
            next[i] = a + b;
        }
        cur = std::move(next);
    }
    cur.resize(count);
    return cur;
}

}  // namespace

void ProcessSpec::validate() const {
    std::visit(overloaded{[](const Far1& f) {
                              validate_scale(f.s, "S");
                              validate_noise(f.innovation);
                          },
                          [](const Far2& f) {
                              validate_scale(f.s1, "S1");
                              validate_scale(f.s2, "S2");
                              validate_noise(f.innovation);
                          },
                          [](const auto& noise) { validate_noise(NoiseSpec(noise)); }},
               kind);
}

std::string ProcessSpec::name() const {
    return std::visit(overloaded{[](const Far1& f) {
                                     std::ostringstream os;
                                     os << "FAR1(S=" << f.s << ")";
                                     return os.str();
                                 },
                                 [](const Far2& f) {
                                     std::ostringstream os;
                                     os << "FAR2(S1=" << f.s1 << ",S2=" << f.s2 << ")";
                                     return os.str();
                                 },
                                 [](const auto& noise) { return noise_name(NoiseSpec(noise)); }},
                      kind);
}

bool ProcessSpec::is_white_noise() const {
    return !std::holds_alternative<Far1>(kind) && !std::holds_alternative<Far2>(kind);
}

ProcessSpec parse_process(const std::string& name) {
    if (name == "bm") return {BrownianMotion{}};
    if (name == "bb") return {BrownianBridge{}};
    if (name == "fourier-cauchy") return {FourierCauchy{}};
    if (name == "bspline-exp") return {BSplineExp{}};
    if (name == "two-dim-gaussian") return {TwoDimGaussian{}};
    if (name == "far1") return {Far1{}};
    if (name == "far2") return {Far2{}};
    throw std::invalid_argument("unknown process '" + name + "'");
}

Surface gaussian_kernel(double S, const GridPtr& grid) {
    validate_scale(S, "S");
    const auto m = grid->size();
    const auto t = grid->points();
    const auto w = grid->weights();
    // |phi|^2 = c^2 (sum_j w_j exp(-t_j^2))^2 on the grid
    double integral = 0.0;
    for (std::size_t j = 0; j < m; ++j) integral += w[j] * std::exp(-t[j] * t[j]);
    const double c = S / integral;
    std::vector<double> g(m);
    for (std::size_t j = 0; j < m; ++j) g[j] = std::exp(-0.5 * t[j] * t[j]);
    std::vector<double> values(m * m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) values[a * m + b] = c * g[a] * g[b];
    }
    return Surface(grid, std::move(values));
}

std::vector<Curve> orthonormal_bsplines(std::size_t count, const GridPtr& grid) {
    if (count < 4) throw std::invalid_argument("cubic B-spline basis needs at least 4 functions");
    const std::size_t interior = count - 4;
    std::vector<double> knots(4, 0.0);
    for (std::size_t k = 1; k <= interior; ++k) knots.push_back(static_cast<double>(k) / static_cast<double>(interior + 1));
    knots.insert(knots.end(), 4, 1.0);

    const auto m = grid->size();
    const auto w = grid->weights();
    std::vector<std::vector<double>> raw(count, std::vector<double>(m));
    for (std::size_t j = 0; j < m; ++j) {
        const auto vals = bspline_values(knots, count, grid->point(j));
        for (std::size_t k = 0; k < count; ++k) raw[k][j] = vals[k];
    }

    std::vector<Curve> basis;
    basis.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        auto v = raw[k];
        for (const auto& prev : basis) {
            const double proj = weighted_dot(v, prev.values(), w);
            for (std::size_t j = 0; j < m; ++j) v[j] -= proj * prev[j];
        }
        const double nrm = std::sqrt(weighted_dot(v, v, w));
        if (!(nrm > 1e-10)) throw std::invalid_argument("grid too coarse to resolve the B-spline basis");
        for (double& x : v) x /= nrm;
        basis.emplace_back(grid, std::move(v));
    }
    return basis;
}

FunctionalSeries generate(const ProcessSpec& spec, std::size_t n, const GridPtr& grid, RandomStream& stream) {
    spec.validate();
    if (n < 1) throw std::invalid_argument("sample size must be positive");

    if (const auto* far1 = std::get_if<Far1>(&spec.kind)) {
        const NoiseSampler noise(far1->innovation, grid);
        const Surface phi = gaussian_kernel(far1->s, grid);
        Curve x = noise.draw(stream);
        std::vector<Curve> out;
        out.reserve(n);
        for (std::size_t i = 0; i < spec.burn_in + n; ++i) {
            x = phi.apply(x) + noise.draw(stream);
            if (i >= spec.burn_in) out.push_back(x);
        }
        return FunctionalSeries(grid, std::move(out));
    }
    if (const auto* far2 = std::get_if<Far2>(&spec.kind)) {
        const NoiseSampler noise(far2->innovation, grid);
        const Surface phi1 = gaussian_kernel(far2->s1, grid);
        const Surface phi2 = gaussian_kernel(far2->s2, grid);
        Curve older = noise.draw(stream);
        Curve prev = noise.draw(stream);
        std::vector<Curve> out;
        out.reserve(n);
        for (std::size_t i = 0; i < spec.burn_in + n; ++i) {
            Curve x = phi1.apply(prev) + phi2.apply(older) + noise.draw(stream);
            older = std::move(prev);
            prev = x;
            if (i >= spec.burn_in) out.push_back(std::move(x));
        }
        return FunctionalSeries(grid, std::move(out));
    }

    const NoiseSpec noise_spec = std::visit(
        overloaded{[](const Far1&) -> NoiseSpec { return BrownianBridge{}; },
                   [](const Far2&) -> NoiseSpec { return BrownianBridge{}; },
                   [](const auto& noise) -> NoiseSpec { return noise; }},
        spec.kind);
    const NoiseSampler noise(noise_spec, grid);
    std::vector<Curve> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(noise.draw(stream));
    return FunctionalSeries(grid, std::move(out));
}

FunctionalSeries generate(const ProcessSpec& spec, std::size_t n, const GridPtr& grid, Seed seed,
                          std::uint32_t replication) {
    auto stream = seed.stream(replication);
    return generate(spec, n, grid, stream);
}

}  // namespace fsacf::sim
