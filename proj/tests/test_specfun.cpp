#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "mfis/specfun.hpp"
#include "test_helpers.hpp"

using namespace mfis;
using mfis::testing::rel_err;

namespace {
const cplx I{0.0, 1.0};
}

// Reference values frozen from an independent ascending-series evaluation
// (30-digit arithmetic).
TEST(Hankel, PinnedSeriesValues) {
    const cplx h01 = hankel1(0.0, 1.0);
    EXPECT_LT(rel_err(h01, cplx{0.765197686557967, 0.088256964215677}), 1e-12);

    const cplx h11 = hankel1(1.0, 1.0);
    EXPECT_LT(rel_err(h11, cplx{0.440050585744934, -0.781212821300289}), 1e-12);

    const cplx h27 = hankel1(2.0, 7.0);  // integer order above 1: recurrence path
    EXPECT_LT(rel_err(h27, cplx{-0.301417220085940, -0.060526609468272}), 1e-11);
}

TEST(Hankel, HalfIntegerClosedForms) {
    // H_{1/2}(z) = -i sqrt(2/(pi z)) e^{iz}; at z = pi this is i sqrt(2)/pi.
    const cplx h = hankel1(0.5, pi);
    EXPECT_LT(std::abs(h - I * (std::sqrt(2.0) / pi)), 1e-15);

    // Recurrence oracle built in-test from the elementary seeds.
    const double z = 2.0;
    const cplx base = std::sqrt(2.0 / (pi * z)) * std::polar(1.0, z);
    const cplx hm = base;        // order -1/2
    const cplx h12 = -I * base;  // order +1/2
    const cplx h32 = (1.0 / z) * h12 - hm;
    EXPECT_LT(rel_err(hankel1(1.5, z), h32), 1e-13);
    EXPECT_LT(rel_err(hankel1(1.5, z), cplx{0.491293778687162, -0.395623281358704}), 1e-12);
}

TEST(Hankel, SeriesAsymptoticSeamAndLargeArgument) {
    // z = 12 is the last series point, 12.5 the asymptotic side; both frozen
    // from the independent 30-digit evaluation.
    EXPECT_LT(rel_err(hankel1(0.0, 12.0), cplx{0.047689310796834, -0.225237312634361}), 1e-10);
    EXPECT_LT(rel_err(hankel1(0.0, 12.5), cplx{0.146884054700421, -0.171214306844669}), 1e-10);
    EXPECT_LT(rel_err(hankel1(0.0, 1000.0), cplx{0.024786686152420, 0.004715917977623}), 1e-11);
}

TEST(Hankel, AgreesWithStdlibBessel) {
    for (double nu : {0.0, 1.0, 2.0}) {
        for (double z : {1e-3, 0.1, 1.0, 5.0, 11.9, 12.1, 40.0, 300.0}) {
            const cplx h = hankel1(nu, z);
            const double j = std::cyl_bessel_j(nu, z);
            const double y = std::cyl_neumann(nu, z);
            EXPECT_LT(std::abs(h - cplx{j, y}) / std::abs(cplx{j, y}), 1e-9)
                << "nu=" << nu << " z=" << z;
        }
    }
}

TEST(Hankel, WronskianIdentity) {
    // J_nu Y'_nu - J'_nu Y_nu = 2/(pi z), derivatives via
    // X'_nu = X_{nu-1} - (nu/z) X_nu.
    for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0}) {
        for (double lz = -3.0; lz <= 3.01; lz += 0.25) {
            const double z = std::pow(10.0, lz);
            const cplx h = hankel1(nu, z);
            const cplx hm = detail::hankel1_any(nu - 1.0, z);
            const double j = h.real(), y = h.imag();
            const double jp = hm.real() - (nu / z) * j;
            const double yp = hm.imag() - (nu / z) * y;
            const double w = j * yp - jp * y;
            EXPECT_LT(rel_err(w, 2.0 / (pi * z)), 1e-9) << "nu=" << nu << " z=" << z;
        }
    }
}

TEST(Hankel, RejectsBadArguments) {
    EXPECT_THROW(hankel1(0.0, 0.0), std::invalid_argument);
    EXPECT_THROW(hankel1(0.0, -1.0), std::invalid_argument);
    EXPECT_THROW(hankel1(-1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(hankel1(0.3, 1.0), std::invalid_argument);
}

TEST(FundamentalSolution, ClosedFormDimensionThree) {
    const KernelParams p(3, 1.0);
    const cplx want = std::polar(1.0, 1.0) / (4.0 * pi);
    EXPECT_LT(rel_err(fundamental_solution(p, 1.0), want), 1e-13);

    // General formula equals e^{ikr}/(4 pi r) across a (k, r) grid.
    for (double k : {0.5, 2.0, 9.0}) {
        const KernelParams pk(3, k);
        for (double r : {0.05, 0.7, 3.0, 40.0}) {
            const cplx closed = std::polar(1.0, k * r) / (4.0 * pi * r);
            EXPECT_LT(rel_err(fundamental_solution(pk, r), closed), 1e-12)
                << "k=" << k << " r=" << r;
        }
    }
}

TEST(FundamentalSolution, DimensionTwoMatchesHankelForm) {
    const KernelParams p(2, 1.0);
    // (i/4) H0(1), components frozen from the series oracle.
    const cplx want{-0.25 * 0.088256964215677, 0.25 * 0.765197686557967};
    EXPECT_LT(rel_err(fundamental_solution(p, 1.0), want), 1e-12);
}

TEST(FundamentalSolution, DimensionFiveTwoRoutes) {
    // nu = 3/2: elementary reduction via the spherical Hankel function
    // h1(z) = -(1 + i/z) e^{iz} / z, H_{3/2}(z) = sqrt(2z/pi) h1(z).
    const KernelParams p(5, 2.0);
    const double r = 0.7, z = p.k * r;
    const cplx h32 = std::sqrt(2.0 * z / pi) * (-(1.0 + I / z) * std::polar(1.0, z) / z);
    const cplx want = (I / 4.0) * std::pow(p.k / (2.0 * pi * r), 1.5) * h32;
    EXPECT_LT(rel_err(fundamental_solution(p, r), want), 1e-12);
}

TEST(FundamentalSolution, RejectsNonpositiveRadius) {
    const KernelParams p(2, 1.0);
    EXPECT_THROW(fundamental_solution(p, 0.0), std::invalid_argument);
    EXPECT_THROW(fundamental_solution(p, -0.5), std::invalid_argument);
    EXPECT_THROW(KernelParams(3, 0.0), std::invalid_argument);
}

TEST(FundamentalSolution, RadialDerivativeMatchesCentralDifference) {
    const double delta = 1e-4;
    for (int n : {2, 3, 4, 5}) {
        const KernelParams p(n, 3.0);
        for (double r : {0.3, 1.0, 2.5}) {
            const cplx fd =
                (fundamental_solution(p, r + delta) - fundamental_solution(p, r - delta)) /
                (2.0 * delta);
            const cplx an = fundamental_solution_radial_derivative(p, r);
            EXPECT_LT(std::abs(an - fd) / std::abs(an), 1e-6) << "n=" << n << " r=" << r;
        }
    }
}

TEST(FundamentalSolution, NormalDerivativePinnedValueAndSymmetry) {
    const KernelParams p(3, 1.0);
    // y = 0, R = 1: d/dr [e^{ir}/(4 pi r)] at r=1 -> e^{i}(i-1)/(4 pi).
    const cplx want = std::polar(1.0, 1.0) * (I - 1.0) / (4.0 * pi);
    const cplx got =
        fundamental_solution_normal_derivative(p, {1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, 1.0);
    EXPECT_LT(rel_err(got, want), 1e-12);

    // Rotational symmetry: identical value at any boundary point for y = 0.
    const double s = 1.0 / std::sqrt(3.0);
    const cplx got2 = fundamental_solution_normal_derivative(p, {s, s, s}, {0.0, 0.0, 0.0}, 1.0);
    EXPECT_LT(std::abs(got - got2), 1e-14);
}

TEST(FundamentalSolution, NormalDerivativeMatchesDirectionalDifference) {
    const KernelParams p(2, 2.0);
    const std::vector<double> x{0.6, 0.8}, y{0.1, -0.2};
    const double delta = 1e-4;
    // Displace x along the outward normal x/R (R=1).
    auto phi_at = [&](double t) {
        std::vector<double> xt{x[0] * (1.0 + t), x[1] * (1.0 + t)};
        const double r = std::hypot(xt[0] - y[0], xt[1] - y[1]);
        return fundamental_solution(p, r);
    };
    const cplx fd = (phi_at(delta) - phi_at(-delta)) / (2.0 * delta);
    const cplx an = fundamental_solution_normal_derivative(p, x, y, 1.0);
    EXPECT_LT(std::abs(an - fd) / std::abs(an), 1e-6);
}

TEST(FundamentalSolution, NormalDerivativeGuards) {
    const KernelParams p(2, 1.0);
    EXPECT_THROW(fundamental_solution_normal_derivative(p, {0.5, 0.0}, {0.0, 0.0}, 1.0),
                 std::invalid_argument);  // x not on the sphere
    EXPECT_THROW(
        fundamental_solution_normal_derivative(p, {1.0, 0.0}, {0.999, 0.0}, 1.0, 0.01),
        std::domain_error);  // closer than the separation guard
}

TEST(FundamentalSolution, RadiationConditionDecay) {
    // |r^{(n-1)/2} (Phi' - ik Phi)| decays monotonically in r.
    for (int n : {2, 3, 4, 5}) {
        const KernelParams p(n, 1.0);
        double prev = 1e300;
        for (double r : {10.0, 100.0, 1000.0}) {
            const cplx phi = fundamental_solution(p, r);
            const cplx dphi = fundamental_solution_radial_derivative(p, r);
            const double resid = std::abs(std::pow(r, 0.5 * (n - 1)) * (dphi - I * p.k * phi));
            EXPECT_LT(resid, prev) << "n=" << n << " r=" << r;
            prev = resid;
        }
    }
}
