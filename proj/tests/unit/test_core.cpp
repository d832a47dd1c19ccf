#include "fsacf/core.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace fsacf;
using fsacf::testing::random_curve;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Curve sin2pi(const GridPtr& g, double a = 1.0) {
    return Curve::from_function(g, [a](double t) { return a * std::sin(kTwoPi * t); });
}
Curve cos2pi(const GridPtr& g) {
    return Curve::from_function(g, [](double t) { return std::cos(kTwoPi * t); });
}

}  // namespace

TEST(Grid, LeftGapWeights) {
    const auto g = Grid::make({0.1, 0.4, 0.5, 1.0});
    const auto w = g->weights();
    EXPECT_DOUBLE_EQ(w[0], 0.1);
    EXPECT_DOUBLE_EQ(w[1], 0.4 - 0.1);
    EXPECT_DOUBLE_EQ(w[2], 0.5 - 0.4);
    EXPECT_DOUBLE_EQ(w[3], 0.5);
}

TEST(Grid, UniformFirstPointHasZeroWeight) {
    const auto g = Grid::uniform(101);
    EXPECT_EQ(g->size(), 101u);
    EXPECT_EQ(g->point(0), 0.0);
    EXPECT_EQ(g->point(100), 1.0);
    EXPECT_EQ(g->weight(0), 0.0);
    double sum = 0.0;
    for (double w : g->weights()) {
        EXPECT_GE(w, 0.0);
        sum += w;
    }
    EXPECT_NEAR(sum, 1.0, 1e-14);
}

TEST(Grid, RejectsInvalidPoints) {
    EXPECT_THROW(Grid::make({0.5}), std::invalid_argument);
    EXPECT_THROW(Grid::make({0.2, 0.2, 0.3}), std::invalid_argument);
    EXPECT_THROW(Grid::make({0.3, 0.2}), std::invalid_argument);
    EXPECT_THROW(Grid::make({-0.1, 0.5}), std::invalid_argument);
    EXPECT_THROW(Grid::make({0.5, 1.2}), std::invalid_argument);
    EXPECT_THROW(Grid::uniform(1), std::invalid_argument);
}

TEST(Grid, WeightsSumToLastPoint) {
    const auto g = Grid::make({0.2, 0.3, 0.7});
    double sum = 0.0;
    for (double w : g->weights()) sum += w;
    EXPECT_DOUBLE_EQ(sum, 0.7);
}

TEST(Curve, RejectsNonFiniteValuesWithPoint) {
    const auto g = Grid::uniform(4);
    try {
        Curve c(g, {0.0, 1.0, std::nan(""), 2.0});
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_EQ(e.point(), 2);
    }
    EXPECT_THROW(Curve(g, {1.0, 2.0}), std::invalid_argument);
}

TEST(Series, RejectsMixedGrids) {
    const auto a = Grid::uniform(5);
    const auto b = Grid::uniform(6);
    EXPECT_THROW(FunctionalSeries(a, {Curve::zeros(a), Curve::zeros(b)}), GridMismatchError);
    EXPECT_THROW(FunctionalSeries(a, {}), std::invalid_argument);
}

TEST(Series, FromRowsNamesTheCurve) {
    const auto g = Grid::uniform(3);
    try {
        (void)FunctionalSeries::from_rows(g, {{1, 2, 3}, {1, INFINITY, 3}});
        FAIL() << "expected DataError";
    } catch (const DataError& e) {
        EXPECT_EQ(e.curve(), 1);
        EXPECT_EQ(e.point(), 1);
    }
}

TEST(Series, EqualValuedGridsAreCompatible) {
    const auto a = Grid::uniform(5);
    const auto b = Grid::uniform(5);
    EXPECT_NO_THROW(FunctionalSeries(a, {Curve::zeros(a), Curve::zeros(b)}));
}

TEST(InnerProduct, ConstantOneIntegratesToOne) {
    const auto g = Grid::uniform(101);
    const auto one = Curve::constant(g, 1.0);
    EXPECT_NEAR(inner_product(one, one), 1.0, 1e-14);
    EXPECT_NEAR(norm(one), 1.0, 1e-14);
}

TEST(InnerProduct, SineCosineOrthogonal) {
    const auto g = Grid::uniform(1001);
    EXPECT_LT(std::abs(inner_product(sin2pi(g), cos2pi(g))), 1e-3);
}

TEST(InnerProduct, SineSquaredIsHalf) {
    const auto g = Grid::uniform(1001);
    EXPECT_NEAR(inner_product(sin2pi(g), sin2pi(g)), 0.5, 1e-3);
}

TEST(InnerProduct, GridMismatchThrows) {
    EXPECT_THROW((void)inner_product(Curve::zeros(Grid::uniform(5)), Curve::zeros(Grid::uniform(7))),
                 GridMismatchError);
}

TEST(InnerProduct, SymmetricAndBilinear) {
    const auto g = Grid::uniform(57);
    std::mt19937_64 gen(11);
    for (int k = 0; k < 50; ++k) {
        const auto f = random_curve(g, gen);
        const auto h = random_curve(g, gen);
        const auto u = random_curve(g, gen);
        EXPECT_DOUBLE_EQ(inner_product(f, h), inner_product(h, f));
        EXPECT_NEAR(inner_product(2.5 * f + h, u), 2.5 * inner_product(f, u) + inner_product(h, u), 1e-12);
    }
}

TEST(InnerProduct, CauchySchwarz) {
    const auto g = Grid::uniform(33);
    std::mt19937_64 gen(5);
    for (int k = 0; k < 500; ++k) {
        const auto f = random_curve(g, gen, 0.1 + k % 7);
        const auto h = random_curve(g, gen);
        EXPECT_LE(std::abs(inner_product(f, h)), norm(f) * norm(h) * (1 + 1e-14));
    }
}

TEST(InnerProduct, ErrorShrinksWithGridRefinement) {
    // left-gap rule is first order: the error halves when the spacing halves
    auto err = [](std::size_t m) {
        const auto g = Grid::uniform(m);
        const auto f = Curve::from_function(g, [](double t) { return std::exp(t); });
        const auto one = Curve::constant(g, 1.0);
        return std::abs(inner_product(f, one) - (std::numbers::e - 1.0));
    };
    double prev = err(51);
    for (std::size_t m : {101, 201, 401, 801}) {
        const double e = err(m);
        EXPECT_NEAR(prev / e, 2.0, 0.05);
        prev = e;
    }
}

TEST(Norm, Examples) {
    const auto g = Grid::uniform(2001);
    EXPECT_EQ(norm(Curve::zeros(g)), 0.0);
    EXPECT_NEAR(norm(sin2pi(g, 2.0)), std::sqrt(2.0), 1e-3);
}

TEST(SpatialSign, CenterMapsToZero) {
    const auto g = Grid::uniform(101);
    const auto c = cos2pi(g);
    const auto s = spatial_sign(c, c);
    EXPECT_EQ(norm(s), 0.0);
}

TEST(SpatialSign, ScaleFree) {
    const auto g = Grid::uniform(101);
    const auto c = Curve::from_function(g, [](double t) { return t * t; });
    const auto s = spatial_sign(c + 3.0 * sin2pi(g), c);
    const auto expected = (1.0 / norm(sin2pi(g))) * sin2pi(g);
    EXPECT_LT(fsacf::testing::max_abs_diff(s, expected), 1e-12);
    EXPECT_NEAR(norm(s), 1.0, 1e-10);
}

TEST(SpatialSign, Antisymmetric) {
    const auto g = Grid::uniform(64);
    std::mt19937_64 gen(3);
    const auto c = random_curve(g, gen);
    const auto d = random_curve(g, gen);
    const auto a = spatial_sign(c - d, c);
    const auto b = spatial_sign(c + d, c);
    EXPECT_LT(fsacf::testing::max_abs_diff(a, -b), 1e-15);
}

TEST(SpatialSign, BelowFloorIsZero) {
    const auto g = Grid::uniform(11);
    const auto c = Curve::zeros(g);
    const auto tiny = Curve::constant(g, 1e-14);
    EXPECT_EQ(norm(spatial_sign(tiny, c)), 0.0);
}

TEST(SpatialSign, NormAndInnerProductBounds) {
    const auto g = Grid::uniform(40);
    std::mt19937_64 gen(17);
    for (int k = 0; k < 300; ++k) {
        const auto c = random_curve(g, gen);
        const auto f = random_curve(g, gen, std::pow(10.0, (k % 9) - 4));
        const auto h = random_curve(g, gen);
        const auto sf = spatial_sign(c + f, c);
        const auto sh = spatial_sign(h, c);
        EXPECT_NEAR(norm(sf), 1.0, 1e-8);
        const double ip = inner_product(sf, sh);
        EXPECT_LE(ip, 1.0 + 1e-8);
        EXPECT_GE(ip, -1.0 - 1e-8);
    }
}

TEST(Difference, Examples) {
    const auto g = Grid::uniform(21);
    const auto constant = FunctionalSeries(g, {Curve::constant(g, 4.0), Curve::constant(g, 4.0), Curve::constant(g, 4.0)});
    const auto d0 = pointwise_difference(constant);
    ASSERT_EQ(d0.size(), 2u);
    for (const auto& c : d0) EXPECT_EQ(norm(c), 0.0);

    const auto t = Curve::from_function(g, [](double x) { return x; });
    const auto d1 = pointwise_difference(FunctionalSeries(g, {Curve::zeros(g), t}));
    ASSERT_EQ(d1.size(), 1u);
    EXPECT_EQ(fsacf::testing::max_abs_diff(d1[0], t), 0.0);

    const auto d2 = pointwise_difference(FunctionalSeries(g, {t, 2.0 * t, 3.0 * t}));
    ASSERT_EQ(d2.size(), 2u);
    for (const auto& c : d2) EXPECT_LT(fsacf::testing::max_abs_diff(c, t), 1e-15);

    EXPECT_THROW((void)pointwise_difference(FunctionalSeries(g, {t})), std::invalid_argument);
}

TEST(Intraday, ConstantPriceGivesZeroReturns) {
    const auto g = Grid::uniform(30);
    const FunctionalSeries p(g, {Curve::constant(g, 101.5), Curve::constant(g, 3.0)});
    for (auto kind : {IntradayKind::log_return, IntradayKind::cidr}) {
        for (const auto& c : intraday_transform(p, kind)) {
            for (double v : c.values()) EXPECT_EQ(v, 0.0);
        }
    }
}

TEST(Intraday, CidrOfExponential) {
    const auto g = Grid::make({0.1, 0.25, 0.5, 0.8, 1.0});
    const FunctionalSeries p(g, {Curve::from_function(g, [](double t) { return std::exp(t); })});
    const auto c = intraday_transform(p, IntradayKind::cidr)[0];
    EXPECT_EQ(c[0], 0.0);
    for (std::size_t j = 0; j < g->size(); ++j) EXPECT_NEAR(c[j], g->point(j) - 0.1, 1e-15);
}

TEST(Intraday, LogReturnDropsLeadingColumns) {
    const auto g = Grid::uniform(11);
    const FunctionalSeries p(g, {Curve::from_function(g, [](double t) { return std::exp(3.0 * t); })});
    const auto r = intraday_transform(p, IntradayKind::log_return, 2);
    ASSERT_EQ(r.grid().size(), 9u);
    EXPECT_DOUBLE_EQ(r.grid().point(0), g->point(2));
    for (double v : r[0].values()) EXPECT_NEAR(v, 3.0 * 0.2, 1e-12);
}

TEST(Intraday, SquareIsPointwise) {
    const auto g = Grid::make({0.5, 1.0});
    const auto sq = intraday_transform(FunctionalSeries(g, {Curve(g, {-2.0, 3.0})}), IntradayKind::square)[0];
    EXPECT_EQ(sq[0], 4.0);
    EXPECT_EQ(sq[1], 9.0);
}

TEST(Intraday, NonpositivePriceNamesCurveAndPoint) {
    const auto g = Grid::uniform(5);
    const FunctionalSeries p(g, {Curve::constant(g, 1.0), Curve(g, {1.0, 2.0, 3.0, 0.0, 1.0})});
    for (auto kind : {IntradayKind::log_return, IntradayKind::cidr}) {
        try {
            (void)intraday_transform(p, kind);
            FAIL() << "expected DataError";
        } catch (const DataError& e) {
            EXPECT_EQ(e.curve(), 1);
            EXPECT_EQ(e.point(), 3);
        }
    }
}

TEST(Surface, ApplyAndNorm) {
    const auto g = Grid::uniform(201);
    // rank-one kernel u(t)u(s) with |u| = 1 has HS norm 1 and maps u to itself
    const auto u = (1.0 / norm(sin2pi(g))) * sin2pi(g);
    std::vector<double> k(g->size() * g->size());
    for (std::size_t a = 0; a < g->size(); ++a) {
        for (std::size_t b = 0; b < g->size(); ++b) k[a * g->size() + b] = u[a] * u[b];
    }
    const Surface s(g, k);
    EXPECT_NEAR(s.norm(), 1.0, 1e-12);
    EXPECT_LT(fsacf::testing::max_abs_diff(s.apply(u), u), 1e-12);
}
