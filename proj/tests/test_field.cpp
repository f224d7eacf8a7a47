#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mfis/field.hpp"
#include "test_helpers.hpp"

using namespace mfis;
using mfis::testing::fd1;
using mfis::testing::fd2;
using mfis::testing::integrate;
using mfis::testing::rel_err;

namespace {

std::size_t node_index(const GridSpec& g, const std::vector<int>& digits) {
    std::size_t idx = 0;
    for (int a = 0; a < g.n; ++a) idx = idx * g.m + digits[a];
    return idx;
}

std::size_t origin_index(const GridSpec& g) {
    return node_index(g, std::vector<int>(g.n, (g.m - 1) / 2));
}

// Closed-form bump profile including the cutoff, as make_bump defines it.
double bump_profile(double r, double R, double w) {
    const double r0 = R - 2.0 * w, r1 = R - w;
    double chi;
    if (r <= r0)
        chi = 1.0;
    else if (r >= r1)
        chi = 0.0;
    else {
        const double t = (r - r0) / (r1 - r0);
        chi = std::exp(1.0 - 1.0 / (1.0 - t * t));
    }
    return std::exp(-r * r / (2.0 * w * w)) * chi;
}

// Independent radial oracle for the n=2 Sobolev norm of a radial profile u:
//   sum_{|alpha|<=2} ||D^alpha f||^2 =
//   int_0^R [ u^2 + u'^2 + (7/8)(u''^2 + v^2) + (1/4) u'' v ] 2 pi r dr,
// v = u'/r, from the angular averages of the Cartesian second derivatives.
double sobolev2_radial_oracle(const std::function<double(double)>& u, double R) {
    return integrate(
        [&](double r) {
            const double ur = u(r);
            const double up = fd1(u, r);
            const double upp = fd2(u, r);
            const double v = up / r;
            const double second = (7.0 / 8.0) * (upp * upp + v * v) + 0.25 * upp * v;
            return (ur * ur + up * up + second) * 2.0 * pi * r;
        },
        1e-9, R, 4000);
}

SourceField random_supported_field(const GridSpec& g, unsigned seed) {
    SourceField f(g, 1, "random");
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    detail::Odometer it(g.n, g.m);
    std::size_t idx = 0;
    do {
        double r2 = 0.0;
        for (int a = 0; a < g.n; ++a) {
            const double x = g.coord(it.digits[a]);
            r2 += x * x;
        }
        f.values[idx] = (r2 < g.R * g.R) ? cplx{uni(gen), uni(gen)} : cplx{0.0, 0.0};
        ++idx;
    } while (it.advance());
    return f;
}

void expect_supported(const SourceField& f) {
    const GridSpec& g = f.spec;
    detail::Odometer it(g.n, g.m);
    std::size_t idx = 0;
    do {
        double r2 = 0.0;
        for (int a = 0; a < g.n; ++a) {
            const double x = g.coord(it.digits[a]);
            r2 += x * x;
        }
        if (r2 >= g.R * g.R) {
            ASSERT_EQ(f.values[idx], (cplx{0.0, 0.0})) << "nonzero node outside the ball";
        }
        ++idx;
    } while (it.advance());
}

}  // namespace

TEST(GridSpec, ValidatesShape) {
    EXPECT_THROW(GridSpec(1, 1.0, 33), std::invalid_argument);
    EXPECT_THROW(GridSpec(2, 1.0, 32), std::invalid_argument);  // even m
    EXPECT_THROW(GridSpec(2, -1.0, 33), std::invalid_argument);
    const GridSpec g(2, 1.0, 33);
    EXPECT_DOUBLE_EQ(g.h(), 2.0 / 32.0);
    EXPECT_DOUBLE_EQ(g.coord((g.m - 1) / 2), 0.0);  // odd m puts the origin on a node
}

TEST(MakeBump, ZeroAmplitudeGivesZeroField) {
    const SourceField f = make_bump(GridSpec(2, 1.0, 33), {0.0, 0.0}, 0.2, cplx{0.0, 0.0});
    for (const cplx& v : f.values) EXPECT_EQ(v, (cplx{0.0, 0.0}));
}

TEST(MakeBump, PinnedPointValues) {
    const GridSpec g(2, 1.0, 101);  // h = 0.02, so x = 0.2 is a node
    const SourceField f = make_bump(g, {0.0, 0.0}, 0.2, cplx{1.0, 0.0});
    EXPECT_DOUBLE_EQ(f.values[origin_index(g)].real(), 1.0);

    std::vector<int> at{(g.m - 1) / 2, g.m - 1};  // x = (0, 1), on the sphere
    EXPECT_EQ(f.values[node_index(g, at)], (cplx{0.0, 0.0}));

    std::vector<int> at2{(g.m - 1) / 2 + 10, (g.m - 1) / 2};  // x = (0.2, 0)
    EXPECT_LT(rel_err(f.values[node_index(g, at2)].real(), std::exp(-0.5)), 1e-14);
}

TEST(MakeBump, RejectsUnsupportedConfigurations) {
    EXPECT_THROW(make_bump(GridSpec(2, 1.0, 33), {0.5, 0.0}, 0.2, cplx{1.0, 0.0}),
                 std::invalid_argument);  // |c| + 3w >= R
    EXPECT_THROW(make_bump(GridSpec(2, 1.0, 33), {0.0}, 0.2, cplx{1.0, 0.0}),
                 std::invalid_argument);  // center dimension
    EXPECT_THROW(make_bump(GridSpec(2, 1.0, 33), {0.0, 0.0}, -0.1, cplx{1.0, 0.0}),
                 std::invalid_argument);
}

TEST(MakeBump, SupportInvariant) {
    expect_supported(make_bump(GridSpec(2, 1.0, 65), {0.1, -0.05}, 0.15, cplx{1.0, 2.0}));
    expect_supported(make_bump(GridSpec(3, 1.0, 33), {0.0, 0.0, 0.0}, 0.2, cplx{1.0, 0.0}));
}

TEST(RadialSpline, HatProfileForDOne) {
    const GridSpec g(2, 1.0, 101);
    const double a = 0.8;
    const SourceField f = make_radial_spline(g, 1, a);
    EXPECT_DOUBLE_EQ(f.values[origin_index(g)].real(), 1.0);
    std::vector<int> at{(g.m - 1) / 2, (g.m - 1) / 2 + 20};  // x = (0, 0.4) -> 1 - 0.4/0.8
    EXPECT_LT(rel_err(f.values[node_index(g, at)].real(), 0.5), 1e-13);
    expect_supported(f);
    EXPECT_THROW(make_radial_spline(g, 1, 1.5), std::invalid_argument);
}

TEST(LaplacianPower, ZeroIterationsIsIdentity) {
    const SourceField f = make_bump(GridSpec(2, 1.0, 65), {0.0, 0.0}, 0.2, cplx{1.0, 1.0});
    const SourceField g = laplacian_power(f, 0);
    EXPECT_EQ(f.values, g.values);
}

TEST(LaplacianPower, GaussianLaplacianAtOrigin) {
    // f = exp(-|x|^2) in n=2: Laplacian at 0 is -2n = -4; grid result O(h^2).
    const GridSpec g(2, 4.0, 257);
    SourceField f(g, 1, "gaussian");
    detail::Odometer it(g.n, g.m);
    std::size_t idx = 0;
    do {
        double r2 = 0.0;
        for (int a = 0; a < g.n; ++a) {
            const double x = g.coord(it.digits[a]);
            r2 += x * x;
        }
        f.values[idx] = (r2 < g.R * g.R) ? cplx{std::exp(-r2), 0.0} : cplx{0.0, 0.0};
        ++idx;
    } while (it.advance());
    const SourceField lf = laplacian_power(f, 1);
    EXPECT_NEAR(lf.values[origin_index(g)].real(), -4.0, 0.01);
}

TEST(LaplacianPower, IteratedAgainstClosedFormAtOrigin) {
    // Laplacian^2 of exp(-r^2/(2 w^2)) at the origin in n=2 is 4 n a^2 (n+2)
    // with a = 1/(2 w^2): for w = 0.2 this is 5000.
    const GridSpec g(2, 1.0, 513);  // h = 1/256
    const SourceField f = make_bump(g, {0.0, 0.0}, 0.2, cplx{1.0, 0.0}, 2);
    const SourceField l2f = laplacian_power(f, 2);
    EXPECT_LT(rel_err(l2f.values[origin_index(g)].real(), 5000.0), 1e-3);
}

TEST(LaplacianPower, RejectsBudgetViolations) {
    const SourceField f = make_bump(GridSpec(2, 1.0, 65), {0.0, 0.0}, 0.2, cplx{1.0, 0.0}, 1);
    EXPECT_THROW(laplacian_power(f, 2), std::invalid_argument);  // exceeds d
    const SourceField tiny = make_bump(GridSpec(2, 1.0, 5), {0.0, 0.0}, 0.1, cplx{1.0, 0.0}, 3);
    EXPECT_THROW(laplacian_power(tiny, 3), std::invalid_argument);  // stencil does not fit
}

TEST(LaplacianPower, LinearityToMachinePrecision) {
    const GridSpec g(2, 1.0, 33);
    const SourceField f = random_supported_field(g, 11);
    const SourceField h = random_supported_field(g, 77);
    const cplx a{0.7, -1.3}, b{-2.1, 0.4};
    const SourceField lhs = laplacian_power(lin_comb(a, f, b, h), 1);
    const SourceField rhs =
        lin_comb(a, laplacian_power(f, 1), b, laplacian_power(h, 1));
    double maxdiff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < lhs.values.size(); ++i) {
        maxdiff = std::max(maxdiff, std::abs(lhs.values[i] - rhs.values[i]));
        scale = std::max(scale, std::abs(lhs.values[i]));
    }
    EXPECT_LT(maxdiff, 1e-12 * scale);
}

TEST(Norms, ZeroFieldHasZeroNorms) {
    const SourceField f(GridSpec(2, 1.0, 33), 1);
    EXPECT_EQ(l2_norm(f), 0.0);
    EXPECT_EQ(sobolev_norm(f), 0.0);
}

TEST(Norms, GaussianL2ClosedForm) {
    // ||f||_2^2 = pi sigma^2 for the n=2 unit bump (cutoff deficit ~1e-10).
    const GridSpec g(2, 1.0, 513);
    const SourceField f = make_bump(g, {0.0, 0.0}, 0.15, cplx{1.0, 0.0});
    EXPECT_LT(rel_err(l2_norm(f), std::sqrt(pi * 0.15 * 0.15)), 1e-6);
}

TEST(Norms, IndicatorVolumeConvergence) {
    // Constant 1 inside the ball: l2^2 approaches the ball volume as h -> 0.
    auto value = [](int m) {
        const GridSpec g(2, 1.0, m);
        SourceField f(g, 1);
        detail::Odometer it(g.n, g.m);
        std::size_t idx = 0;
        do {
            double r2 = 0.0;
            for (int a = 0; a < g.n; ++a) {
                const double x = g.coord(it.digits[a]);
                r2 += x * x;
            }
            f.values[idx] = (r2 < 1.0) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
            ++idx;
        } while (it.advance());
        const double v = l2_norm(f);
        return v * v;
    };
    const double coarse = std::abs(value(65) - pi);
    const double fine = std::abs(value(257) - pi);
    EXPECT_LT(fine, coarse);
    EXPECT_LT(fine / pi, 0.02);
}

TEST(Norms, SobolevOracleForBump) {
    const double w = 0.2, R = 1.0;
    const GridSpec g(2, R, 513);
    const SourceField f = make_bump(g, {0.0, 0.0}, w, cplx{1.0, 0.0}, 1);
    const double oracle =
        std::sqrt(sobolev2_radial_oracle([&](double r) { return bump_profile(r, R, w); }, R));
    EXPECT_LT(rel_err(sobolev_norm(f), oracle), 1e-3);
}

TEST(Norms, SobolevDominatesL2) {
    const SourceField f = make_bump(GridSpec(2, 1.0, 129), {0.0, 0.0}, 0.2, cplx{1.0, 0.0}, 1);
    EXPECT_GE(sobolev_norm(f), l2_norm(f));
    const SourceField r = random_supported_field(GridSpec(2, 1.0, 65), 5);
    EXPECT_GE(sobolev_norm(r), l2_norm(r));
}

TEST(Norms, GridRefinementConverges) {
    const double w = 0.25, R = 1.0;
    auto profile = [&](double r) { return bump_profile(r, R, w); };

    // Sobolev norm: stencil error O(h^2), slope about 2.
    const double sob_exact = std::sqrt(sobolev2_radial_oracle(profile, R));
    std::vector<double> sob_err;
    for (int m : {33, 65, 129}) {
        const SourceField f = make_bump(GridSpec(2, R, m), {0.0, 0.0}, w, cplx{1.0, 0.0}, 1);
        sob_err.push_back(std::abs(sobolev_norm(f) - sob_exact));
    }
    EXPECT_GT(std::log2(sob_err[0] / sob_err[1]), 1.8);
    EXPECT_GT(std::log2(sob_err[1] / sob_err[2]), 1.8);

    // L2 norm: trapezoid on a smooth compact profile converges faster than
    // O(h^2); measure on coarse grids before the error floor.
    const double l2_exact = std::sqrt(integrate(
        [&](double r) { return profile(r) * profile(r) * 2.0 * pi * r; }, 1e-9, R, 4000));
    std::vector<double> l2e;
    for (int m : {9, 17, 33}) {
        const SourceField f = make_bump(GridSpec(2, R, m), {0.0, 0.0}, w, cplx{1.0, 0.0}, 1);
        l2e.push_back(std::abs(l2_norm(f) - l2_exact));
    }
    EXPECT_GT(std::log2(l2e[0] / l2e[1]), 1.8);
    EXPECT_GT(std::log2(l2e[1] / l2e[2]), 1.8);
}

TEST(Norms, SupportInvariantAfterOperations) {
    const SourceField f = make_bump(GridSpec(2, 1.0, 65), {0.0, 0.0}, 0.25, cplx{1.0, 0.0}, 2);
    expect_supported(laplacian_power(f, 1));
    expect_supported(laplacian_power(f, 2));
}
