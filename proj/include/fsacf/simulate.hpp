#pragma once

#include "fsacf/core.hpp"
#include "fsacf/rng.hpp"

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace fsacf::sim {

/// W(t_j) = sum_{l<=j} sqrt(t_l - t_{l-1}) Z_l.
struct BrownianMotion {};
/// B(t) = W(t) - t W(1).
struct BrownianBridge {};
/// Z_1 + sum_{k=1}^{3} [Z_{2k} cos(2 pi k t) + Z_{2k+1} sin(2 pi k t)], Z iid standard Cauchy.
struct FourierCauchy {};
/// sum_k e_k B_k(t), e iid Exp(1), B_k orthonormalized cubic B-splines.
struct BSplineExp {
    std::size_t basis_count = 8;
};
/// sqrt(2 l1) Z_1 sin(2 pi t) + sqrt(2 l2) Z_2 cos(2 pi t).
struct TwoDimGaussian {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
};

using NoiseSpec = std::variant<BrownianMotion, BrownianBridge, FourierCauchy, BSplineExp, TwoDimGaussian>;

/// X_i = int phi_S(t,s) X_{i-1}(s) ds + e_i.
struct Far1 {
    double s = 0.0;
    NoiseSpec innovation = BrownianBridge{};
};
/// X_i = int phi_{S1} X_{i-1} + int phi_{S2} X_{i-2} + e_i.
struct Far2 {
    double s1 = 0.0;
    double s2 = 0.0;
    NoiseSpec innovation = BrownianBridge{};
};

struct ProcessSpec {
    std::variant<BrownianMotion, BrownianBridge, FourierCauchy, BSplineExp, TwoDimGaussian, Far1, Far2> kind;
    /// Leading curves discarded for the autoregressive kinds.
    std::size_t burn_in = 100;

    void validate() const;
    [[nodiscard]] std::string name() const;
    [[nodiscard]] bool is_white_noise() const;
};

/// Parses the command-line process names: bm, bb, fourier-cauchy, bspline-exp, two-dim-gaussian, far1, far2.
[[nodiscard]] ProcessSpec parse_process(const std::string& name);

/**
 * @brief Sign-scaled Gaussian kernel c exp(-(t^2 + s^2)/2).
 *
 * c is calibrated against the grid quadrature so that the Riemann
 * Hilbert-Schmidt norm equals |S| and sign(c) = sign(S).
 */
[[nodiscard]] Surface gaussian_kernel(double S, const GridPtr& grid);

/// Cubic B-spline basis with equally spaced interior knots, orthonormalized
/// on the grid by modified Gram-Schmidt.
[[nodiscard]] std::vector<Curve> orthonormal_bsplines(std::size_t count, const GridPtr& grid);

[[nodiscard]] FunctionalSeries generate(const ProcessSpec& spec, std::size_t n, const GridPtr& grid,
                                        RandomStream& stream);

/// Uses the stream of the given replication under seed.
[[nodiscard]] FunctionalSeries generate(const ProcessSpec& spec, std::size_t n, const GridPtr& grid, Seed seed,
                                        std::uint32_t replication = 0);

}  // namespace fsacf::sim
