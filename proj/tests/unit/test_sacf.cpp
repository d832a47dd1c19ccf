#include "fsacf/sacf.hpp"

#include "fsacf/simulate.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace fsacf;
using fsacf::testing::random_series;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Direct double-sum HS norm of (1/n) sum_i S_i(t) S_i(s).
double cp_norm_oracle(const FunctionalSeries& s, const Curve& center) {
    const auto g = s.grid_ptr();
    const auto m = g->size();
    std::vector<Curve> signs;
    for (const auto& x : s) signs.push_back(spatial_sign(x, center));
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
            double c = 0.0;
            for (const auto& sg : signs) c += sg[j] * sg[k];
            c /= static_cast<double>(s.size());
            acc += c * c * g->weight(j) * g->weight(k);
        }
    }
    return std::sqrt(acc);
}

double rho_oracle(const FunctionalSeries& s, const Curve& center, std::size_t h) {
    double acc = 0.0;
    for (std::size_t i = 0; i + h < s.size(); ++i) {
        acc += inner_product(spatial_sign(s[i], center), spatial_sign(s[i + h], center));
    }
    return acc / static_cast<double>(s.size());
}

}  // namespace

TEST(Sacf, LagZeroIsOne) {
    const auto g = Grid::uniform(101);
    const auto s = random_series(g, 40, 1);
    const auto est = sacf(s, 5);
    EXPECT_EQ(est.at(0), 1.0);
}

TEST(Sacf, LagZeroCountsNonDegenerateCurves) {
    const auto g = Grid::uniform(11);
    const auto zero = Curve::zeros(g);
    const auto one = Curve::constant(g, 1.0);
    const auto est = sacf(FunctionalSeries(g, {zero, one, zero, one}), 1, zero);
    EXPECT_EQ(est.at(0), 0.5);
}

TEST(Sacf, OrthogonalPairGivesZero) {
    const auto g = Grid::uniform(1001);
    const auto f = Curve::from_function(g, [](double t) { return std::sin(kTwoPi * t); });
    const auto h = Curve::from_function(g, [](double t) { return std::cos(kTwoPi * t); });
    const auto est = sacf(FunctionalSeries(g, {f, h}), 1, Curve::zeros(g));
    EXPECT_NEAR(est.at(1), 0.0, 1e-3);
    EXPECT_EQ(est.centered_by, CenterSource::supplied_center);
}

TEST(Sacf, IdenticalPairGivesHalf) {
    const auto g = Grid::uniform(1001);
    const auto f = Curve::from_function(g, [](double t) { return std::sin(kTwoPi * t); });
    const auto est = sacf(FunctionalSeries(g, {f, f}), 1, Curve::zeros(g));
    EXPECT_NEAR(est.at(1), 0.5, 1e-14);
}

TEST(Sacf, MatchesDirectComputation) {
    const auto g = Grid::make({0.05, 0.2, 0.3, 0.55, 0.8, 0.9});
    const auto s = random_series(g, 25, 2);
    const auto est = sacf(s, 6);
    ASSERT_EQ(est.centered_by, CenterSource::estimated_median);
    ASSERT_TRUE(est.center.has_value());
    for (std::size_t h = 1; h <= 6; ++h) EXPECT_NEAR(est.at(h), rho_oracle(s, *est.center, h), 1e-14);
    EXPECT_NEAR(est.cp_norm, cp_norm_oracle(s, *est.center), 1e-13);
}

TEST(Sacf, LagMustBeBelowSampleSize) {
    const auto g = Grid::uniform(11);
    const auto s = random_series(g, 5, 3);
    EXPECT_THROW((void)sacf(s, 5), std::invalid_argument);
    EXPECT_NO_THROW((void)sacf(s, 4));
}

TEST(Sacf, CenterOnAnotherGridThrows) {
    const auto s = random_series(Grid::uniform(11), 5, 3);
    EXPECT_THROW((void)sacf(s, 1, Curve::zeros(Grid::uniform(12))), GridMismatchError);
}

TEST(Sacf, EstimatorBoundAndNormRange) {
    const auto g = Grid::uniform(31);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        // mix of white noise and strongly persistent data
        auto s = random_series(g, 30, seed);
        if (seed % 2) {
            std::vector<Curve> c;
            Curve x = s[0];
            for (const auto& e : s) {
                x = 0.95 * x + 0.1 * e;
                c.push_back(x);
            }
            s = FunctionalSeries(g, c);
        }
        const auto est = sacf(s, 29);
        for (std::size_t h = 1; h <= 29; ++h) {
            EXPECT_LE(std::abs(est.at(h)), (30.0 - h) / 30.0 + 1e-12);
        }
        EXPECT_GT(est.cp_norm, 0.0);
        EXPECT_LE(est.cp_norm, 1.0 + 1e-12);
    }
}

TEST(Sacf, InvariantUnderRescalingAboutTheCenter) {
    const auto g = Grid::uniform(101);
    sim::ProcessSpec spec{sim::Far1{0.5}};
    const auto s = sim::generate(spec, 200, g, Seed{12});
    const auto est = sacf(s, 10);
    for (double c : {1e-3, 0.5, 40.0}) {
        std::vector<Curve> scaled;
        for (const auto& x : s) scaled.push_back(c * (x - *est.center) + *est.center);
        const auto other = sacf(FunctionalSeries(g, scaled), 10, *est.center);
        for (std::size_t h = 1; h <= 10; ++h) EXPECT_NEAR(other.at(h), est.at(h), 1e-10);
    }
}

TEST(CpNorm, RankOneUnitKernel) {
    const auto g = Grid::uniform(101);
    const auto center = Curve::from_function(g, [](double t) { return t; });
    const auto f = Curve::from_function(g, [](double t) { return std::exp(t) - 2.0; });
    const auto s = FunctionalSeries(g, {center + f, center + f, center + f});
    EXPECT_NEAR(cp_norm(s, center), 1.0, 1e-8);
}

TEST(CpNorm, TwoDimensionalGaussianClosedForms) {
    const auto g = Grid::uniform(101);
    const auto zero = Curve::zeros(g);
    const auto a = sim::generate({sim::TwoDimGaussian{1.0, 1.0}}, 2000, g, Seed{31});
    EXPECT_NEAR(std::pow(cp_norm(a, zero), 2), 0.5, 0.05);
    const auto b = sim::generate({sim::TwoDimGaussian{1.0, 2.0}}, 2000, g, Seed{32});
    EXPECT_NEAR(std::pow(cp_norm(b, zero), 2), 9.0 - 6.0 * std::sqrt(2.0), 0.05);
}

TEST(ConfidenceBound, Examples) {
    EXPECT_NEAR(confidence_bound(100, 1.0, 0.05), 0.1959964, 1e-6);
    EXPECT_NEAR(confidence_bound(100, 0.5, 0.05), 0.5 * confidence_bound(100, 1.0, 0.05), 1e-15);
    EXPECT_NEAR(confidence_bound(400, 0.7, 0.1), 0.5 * confidence_bound(100, 0.7, 0.1), 1e-15);
    EXPECT_THROW((void)confidence_bound(100, 1.0, 0.0), std::invalid_argument);
    EXPECT_THROW((void)confidence_bound(100, 1.0, 1.0), std::invalid_argument);
}

TEST(Portmanteau, Arithmetic) {
    SacfEstimate est;
    est.n = 100;
    est.rho = {0.1, -0.2};
    est.cp_norm = 1.0;
    const auto r = portmanteau(est, 2);
    EXPECT_NEAR(r.statistic, 5.0, 1e-12);
    EXPECT_NEAR(r.p_value, std::exp(-2.5), 1e-12);
}

TEST(Portmanteau, ZeroRhoGivesPOne) {
    SacfEstimate est;
    est.n = 50;
    est.rho = {0.0, 0.0, 0.0};
    est.cp_norm = 0.4;
    const auto r = portmanteau(est, 3);
    EXPECT_EQ(r.statistic, 0.0);
    EXPECT_EQ(r.p_value, 1.0);
}

TEST(Portmanteau, ScaledByNormSquared) {
    SacfEstimate est;
    est.n = 1;
    est.cp_norm = 0.5;
    est.rho = {std::sqrt(5.991465 * 0.25 / 2.0), std::sqrt(5.991465 * 0.25 / 2.0)};
    const auto r = portmanteau(est, 2);
    EXPECT_NEAR(r.statistic / 0.25, 5.991465, 1e-12);
    EXPECT_NEAR(r.p_value, 0.05, 1e-6);
}

TEST(Portmanteau, HOutOfRange) {
    SacfEstimate est;
    est.n = 10;
    est.rho = {0.1};
    est.cp_norm = 1.0;
    EXPECT_THROW((void)portmanteau(est, 2), std::invalid_argument);
    EXPECT_THROW((void)portmanteau(est, 0), std::invalid_argument);
}

TEST(Portmanteau, LagOneMatchesTheBand) {
    const auto g = Grid::uniform(101);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto s = sim::generate({sim::Far1{0.2}}, 150, g, Seed{seed});
        const auto est = sacf(s, 1);
        const bool outside = std::abs(est.at(1)) > est.bound(0.05);
        const bool reject = portmanteau(est, 1).p_value < 0.05;
        EXPECT_EQ(outside, reject) << "seed " << seed;
    }
}

TEST(Facf, LagZeroOneForRankOne) {
    const auto g = Grid::uniform(101);
    const auto v = Curve::from_function(g, [](double t) { return std::cos(3 * t); });
    std::vector<Curve> c;
    for (double a : {1.0, -2.0, 0.5, 3.0, -1.5}) c.push_back(a * v);
    const auto f = facf(FunctionalSeries(g, c), 3);
    ASSERT_EQ(f.size(), 4u);
    EXPECT_NEAR(f[0], 1.0, 1e-12);
    for (double x : f) EXPECT_GE(x, 0.0);
}

TEST(Facf, ZeroTraceThrows) {
    const auto g = Grid::uniform(11);
    const auto c = Curve::constant(g, 2.0);
    EXPECT_THROW((void)facf(FunctionalSeries(g, {c, c, c}), 1), DataError);
}

TEST(Facf, WhiteNoiseIsSmall) {
    const auto g = Grid::uniform(101);
    const auto s = sim::generate({sim::BrownianBridge{}}, 2000, g, Seed{5});
    const auto f = facf(s, 10);
    for (std::size_t h = 1; h <= 10; ++h) {
        EXPECT_GE(f[h], 0.0);
        EXPECT_LT(f[h], 0.1);
    }
}

TEST(Facf, SignBlindWhereSacfIsNot) {
    const auto g = Grid::uniform(101);
    const auto s = sim::generate({sim::Far1{-0.5}}, 1000, g, Seed{8});
    EXPECT_GT(facf(s, 1)[1], 0.0);
    EXPECT_LT(sacf(s, 1).at(1), 0.0);
}

TEST(Sacf, KnownAndEstimatedCentersAgreeForLargeN) {
    const auto g = Grid::uniform(101);
    const auto zero = Curve::zeros(g);
    double total = 0.0;
    int count = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto s = sim::generate({sim::BrownianBridge{}}, 2000, g, Seed{100 + seed});
        const auto est = sacf(s, 10);
        const auto known = sacf(s, 10, zero);
        for (std::size_t h = 1; h <= 10; ++h) {
            total += std::abs(est.at(h) - known.at(h));
            ++count;
        }
    }
    EXPECT_LT(total / count, 0.01);
}
