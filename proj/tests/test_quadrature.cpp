#include <gtest/gtest.h>

#include <cmath>

#include "mfis/quadrature.hpp"
#include "test_helpers.hpp"

using namespace mfis;
using mfis::testing::rel_err;

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    const Rule1D r = gauss_legendre_on(0.0, 1.0, 16);
    double sum = 0.0, x8 = 0.0, x31 = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        sum += r.weights[i];
        x8 += r.weights[i] * std::pow(r.nodes[i], 8);
        x31 += r.weights[i] * std::pow(r.nodes[i], 31);
    }
    EXPECT_LT(rel_err(sum, 1.0), 1e-14);
    EXPECT_LT(rel_err(x8, 1.0 / 9.0), 1e-14);
    EXPECT_LT(rel_err(x31, 1.0 / 32.0), 1e-13);  // degree 31 = 2*16 - 1, still exact
}

TEST(GaussLegendre, NodesAscendInsideInterval) {
    const Rule1D r = gauss_legendre_on(0.0, 5.0, 64);
    EXPECT_GT(r.nodes.front(), 0.0);
    EXPECT_LT(r.nodes.back(), 5.0);
    for (std::size_t i = 1; i < r.nodes.size(); ++i) EXPECT_GT(r.nodes[i], r.nodes[i - 1]);
}

TEST(SphereRule, CircleIsUniform) {
    const SphereRule rule = make_sphere_rule(2, 1.0, 64);
    ASSERT_EQ(rule.count(), 64u);
    for (std::size_t i = 0; i < rule.count(); ++i)
        EXPECT_NEAR(rule.weights[i], 2.0 * pi / 64.0, 1e-15);
    double sum = 0.0;
    for (double w : rule.weights) sum += w;
    EXPECT_LT(rel_err(sum, 2.0 * pi), 1e-13);
}

TEST(SphereRule, SurfaceAreas) {
    // n=3, R=1: 4 pi. n=4, R=2: 2 pi^2 R^3 = 16 pi^2.
    const SphereRule s3 = make_sphere_rule(3, 1.0, 16);
    double sum3 = 0.0;
    for (double w : s3.weights) sum3 += w;
    EXPECT_LT(rel_err(sum3, 4.0 * pi), 1e-12);

    const SphereRule s4 = make_sphere_rule(4, 2.0, 12);
    double sum4 = 0.0;
    for (double w : s4.weights) sum4 += w;
    EXPECT_LT(rel_err(sum4, 16.0 * pi * pi), 1e-12);
    EXPECT_LT(rel_err(sphere_area(4, 2.0), 16.0 * pi * pi), 1e-14);
}

TEST(SphereRule, NodesLieOnSphereAndIntegrateCoordinates) {
    for (int n : {2, 3, 4}) {
        const double R = 1.5;
        const SphereRule rule = make_sphere_rule(n, R, 16);
        EXPECT_EQ(rule.count(), static_cast<std::size_t>(std::pow(16, n - 1)));
        double x1sq = 0.0;
        for (std::size_t i = 0; i < rule.count(); ++i) {
            double r2 = 0.0;
            for (int a = 0; a < n; ++a) r2 += rule.node(i)[a] * rule.node(i)[a];
            EXPECT_LT(std::abs(std::sqrt(r2) - R), 1e-12);
            x1sq += rule.weights[i] * rule.node(i)[0] * rule.node(i)[0];
        }
        // int_{|x|=R} x1^2 ds = area * R^2 / n
        EXPECT_LT(rel_err(x1sq, sphere_area(n, R) * R * R / n), 1e-11);
    }
}

TEST(SphereRule, RejectsCoarseResolution) {
    EXPECT_THROW(make_sphere_rule(2, 1.0, 7), std::invalid_argument);
    EXPECT_THROW(make_sphere_rule(1, 1.0, 16), std::invalid_argument);
}

TEST(DirectionSet, WeightsSumToUnitSphereArea) {
    const DirectionSet d2 = make_direction_set(2, 32);
    double s = 0.0;
    for (double w : d2.weights) s += w;
    EXPECT_LT(rel_err(s, 2.0 * pi), 1e-13);

    const DirectionSet d3 = make_direction_set(3, 16);
    s = 0.0;
    for (double w : d3.weights) s += w;
    EXPECT_LT(rel_err(s, 4.0 * pi), 1e-12);
}

TEST(FrequencyGrid, GaussCoversBand) {
    const FrequencyGrid g = FrequencyGrid::gauss(8.0, 64);
    EXPECT_EQ(g.count(), 64u);
    EXPECT_GT(g.nodes.front(), 0.0);
    EXPECT_LT(g.nodes.back(), 8.0);
    EXPECT_DOUBLE_EQ(g.K, 8.0);
    double s = 0.0;
    for (double w : g.weights) s += w;
    EXPECT_LT(rel_err(s, 8.0), 1e-13);
}

TEST(FrequencyGrid, ExplicitNodesAreSortedOnConstruction) {
    const FrequencyGrid g = FrequencyGrid::from_nodes({8.0, 1.0, 4.0});
    ASSERT_EQ(g.count(), 3u);
    EXPECT_DOUBLE_EQ(g.nodes[0], 1.0);
    EXPECT_DOUBLE_EQ(g.nodes[1], 4.0);
    EXPECT_DOUBLE_EQ(g.nodes[2], 8.0);
    EXPECT_DOUBLE_EQ(g.K, 8.0);
    EXPECT_THROW(FrequencyGrid::from_nodes({-1.0, 2.0}), std::invalid_argument);
    EXPECT_THROW(FrequencyGrid::from_nodes({}), std::invalid_argument);
}
