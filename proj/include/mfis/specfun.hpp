// Outgoing fundamental solution of the Helmholtz operator in dimension n and
// the Bessel/Hankel special functions it requires.
//
// Supported orders are nu = 0, 1/2, 1, 3/2, 2, ... Integer orders use
// ascending series for z <= 12 and the large-argument Hankel expansion
// beyond; half-integer orders reduce to closed elementary forms. Relative
// accuracy is ~1e-11 over z in [1e-3, 1e3] for the orders exercised by
// dimensions n <= 6 (J-parts of half-integer orders >= 5/2 degrade below
// z ~ 1e-1, which no supported dimension reaches).
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "mfis/grid.hpp"

namespace mfis {

namespace detail {

inline constexpr double euler_gamma = 0.57721566490153286061;

// Ascending series, integer order, z <= ~12.
inline double bessel_j_int_series(int nu, double z) {
    const double q = 0.25 * z * z;
    double term = 1.0;
    for (int i = 1; i <= nu; ++i) term *= 0.5 * z / i;  // (z/2)^nu / nu!
    double sum = term;
    for (int m = 1; m < 80; ++m) {
        term *= -q / (static_cast<double>(m) * (m + nu));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-30) && m > 4) break;
    }
    return sum;
}

inline double bessel_y0_series(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 0.0, harmonic = 0.0;
    for (int m = 1; m < 80; ++m) {
        term *= q / (static_cast<double>(m) * m);
        harmonic += 1.0 / m;
        const double t = ((m % 2) ? 1.0 : -1.0) * harmonic * term;
        sum += t;
        if (std::abs(t) < 1e-18 * (std::abs(sum) + 1e-30) && m > 4) break;
    }
    return (2.0 / pi) * ((std::log(0.5 * z) + euler_gamma) * bessel_j_int_series(0, z) + sum);
}

inline double bessel_y1_series(double z) {
    const double q = 0.25 * z * z;
    // sum over m of (-1)^m [psi(m+1)+psi(m+2)] (z^2/4)^m / (m!(m+1)!) * (z/2)
    double term = 0.5 * z;  // m = 0 base of (z/2)^{2m+1}/(m!(m+1)!)
    double h1 = 0.0, h2 = 1.0;
    double sum = term * (2.0 * (-euler_gamma) + 1.0);  // psi(1)+psi(2) = -2g+1
    for (int m = 1; m < 80; ++m) {
        term *= -q / (static_cast<double>(m) * (m + 1));
        h1 += 1.0 / m;
        h2 += 1.0 / (m + 1);
        const double t = term * (2.0 * (-euler_gamma) + h1 + h2);
        sum += t;
        if (std::abs(t) < 1e-18 * (std::abs(sum) + 1e-30) && m > 4) break;
    }
    return (2.0 / pi) * std::log(0.5 * z) * bessel_j_int_series(1, z) - 2.0 / (pi * z) -
           sum / pi;
}

// Large-argument Hankel expansion, optimal truncation, up to 60 terms:
// H_nu(z) ~ sqrt(2/(pi z)) e^{i omega} sum_m i^m t_m,
// t_m = prod_{l<=m} (4 nu^2 - (2l-1)^2) / (m! (8z)^m).
inline cplx hankel1_asymptotic(double nu, double z) {
    const double fournu2 = 4.0 * nu * nu;
    cplx s{1.0, 0.0};
    double t = 1.0, prev = 1.0;
    cplx ipow{0.0, 1.0};
    for (int m = 1; m <= 60; ++m) {
        const double odd = 2.0 * m - 1.0;
        t *= (fournu2 - odd * odd) / (8.0 * z * m);
        if (std::abs(t) > prev) break;  // series turned divergent
        s += ipow * t;
        prev = std::abs(t);
        ipow *= cplx{0.0, 1.0};
        if (prev < 1e-18) break;
    }
    const double omega = z - 0.5 * nu * pi - 0.25 * pi;
    return std::sqrt(2.0 / (pi * z)) * std::polar(1.0, omega) * s;
}

// Closed elementary forms for half-integer orders: upward recurrence
// H_{nu+1} = (2 nu / z) H_nu - H_{nu-1} from the exact seeds
// H_{-1/2} = sqrt(2/(pi z)) e^{iz},  H_{1/2} = -i sqrt(2/(pi z)) e^{iz}.
inline cplx hankel1_half_integer(int twice_nu, double z) {
    const cplx base = std::sqrt(2.0 / (pi * z)) * std::polar(1.0, z);
    cplx hm = base;                    // order -1/2
    cplx h = cplx{0.0, -1.0} * base;   // order +1/2
    if (twice_nu == -1) return hm;
    for (int q = 1; 2 * q - 1 < twice_nu; ++q) {
        const cplx next = ((2.0 * q - 1.0) / z) * h - hm;
        hm = h;
        h = next;
    }
    return h;
}

inline cplx hankel1_integer(int nu, double z) {
    if (z > 12.0) return hankel1_asymptotic(static_cast<double>(nu), z);
    const double j = bessel_j_int_series(nu, z);
    double y0 = bessel_y0_series(z);
    if (nu == 0) return {j, y0};
    double y1 = bessel_y1_series(z);
    for (int q = 1; q < nu; ++q) {  // Y grows with order: upward is stable
        const double next = (2.0 * q / z) * y1 - y0;
        y0 = y1;
        y1 = next;
    }
    return {j, y1};
}

}  // namespace detail

/// Hankel function of the first kind H^(1)_nu(z) = J_nu(z) + i Y_nu(z) for
/// nonnegative integer or half-integer order and z > 0.
inline cplx hankel1(double nu, double z) {
    if (z <= 0.0) throw std::invalid_argument("hankel1: argument z must be positive");
    if (nu < 0.0) throw std::invalid_argument("hankel1: order must be nonnegative");
    const double twice = 2.0 * nu;
    const double rounded = std::round(twice);
    if (std::abs(twice - rounded) > 1e-12)
        throw std::invalid_argument("hankel1: order must be integer or half-integer");
    const int t2 = static_cast<int>(rounded);
    if (t2 % 2 == 0) {
        if (z > 12.0) return detail::hankel1_asymptotic(nu, z);
        return detail::hankel1_integer(t2 / 2, z);
    }
    return detail::hankel1_half_integer(t2, z);
}

namespace detail {

// Negative orders via the reflection H^(1)_{-nu} = e^{i nu pi} H^(1)_nu;
// needed only for the kernel derivative (orders down to -1).
inline cplx hankel1_any(double nu, double z) {
    if (nu >= 0.0) return hankel1(nu, z);
    return std::polar(1.0, -nu * pi) * hankel1(-nu, z);
}

}  // namespace detail

inline double bessel_j(double nu, double z) { return hankel1(nu, z).real(); }
inline double bessel_y(double nu, double z) { return hankel1(nu, z).imag(); }

/// Helmholtz kernel parameters: dimension and wave number. The Hankel order
/// of the outgoing kernel is (n-2)/2.
struct KernelParams {
    int n;
    double k;

    KernelParams(int n_, double k_) : n(n_), k(k_) {
        if (n < 2) throw std::invalid_argument("KernelParams: dimension must be >= 2");
        if (k <= 0.0) throw std::invalid_argument("KernelParams: wave number must be positive");
    }

    double nu() const { return 0.5 * (n - 2); }
};

/// Outgoing fundamental solution at radius r:
///   Phi_k(r) = (i/4) (k/(2 pi r))^{(n-2)/2} H^(1)_{(n-2)/2}(k r),
/// normalized so (Laplacian + k^2) Phi = -delta. Reduces to e^{ikr}/(4 pi r)
/// for n=3 and (i/4) H0(kr) for n=2.
inline cplx fundamental_solution(const KernelParams& p, double r) {
    if (r <= 0.0) throw std::invalid_argument("fundamental_solution: r must be positive");
    const double nu = p.nu();
    const cplx h = hankel1(nu, p.k * r);
    const double pref = std::pow(p.k / (2.0 * pi * r), nu);
    return cplx{0.0, 0.25} * pref * h;
}

/// d/dr of the fundamental solution, via H'_nu(z) = H_{nu-1}(z) - (nu/z) H_nu(z):
///   Phi'(r) = (i/4) (k/(2 pi))^nu r^{-nu} [ k H_{nu-1}(kr) - (2 nu / r) H_nu(kr) ].
inline cplx fundamental_solution_radial_derivative(const KernelParams& p, double r) {
    if (r <= 0.0)
        throw std::invalid_argument("fundamental_solution_radial_derivative: r must be positive");
    const double nu = p.nu();
    const double z = p.k * r;
    const cplx h = hankel1(nu, z);
    const cplx hm = detail::hankel1_any(nu - 1.0, z);
    const double pref = std::pow(p.k / (2.0 * pi), nu) * std::pow(r, -nu);
    return cplx{0.0, 0.25} * pref * (p.k * hm - (2.0 * nu / r) * h);
}

/// Normal derivative of Phi_k(|x-y|) with respect to x on the sphere |x| = R,
/// outward normal x/R. `min_separation` guards quadrature nodes that sit too
/// close to the singularity (a misconfigured grid); 0 disables the guard.
inline cplx fundamental_solution_normal_derivative(const KernelParams& p,
                                                   const std::vector<double>& x,
                                                   const std::vector<double>& y, double R,
                                                   double min_separation = 0.0) {
    if (static_cast<int>(x.size()) != p.n || static_cast<int>(y.size()) != p.n)
        throw std::invalid_argument("fundamental_solution_normal_derivative: dimension mismatch");
    double xn2 = 0.0, r2 = 0.0, dot = 0.0;
    for (int a = 0; a < p.n; ++a) {
        xn2 += x[a] * x[a];
        const double da = x[a] - y[a];
        r2 += da * da;
        dot += da * x[a];
    }
    if (std::abs(std::sqrt(xn2) - R) > 1e-12 * std::max(1.0, R))
        throw std::invalid_argument("fundamental_solution_normal_derivative: x not on the sphere");
    const double r = std::sqrt(r2);
    if (r < min_separation)
        throw std::domain_error(
            "fundamental_solution_normal_derivative: node within min separation of the "
            "singularity (grid too tight against the sphere)");
    if (r == 0.0)
        throw std::invalid_argument("fundamental_solution_normal_derivative: x equals y");
    const double cosang = dot / (r * R);
    return fundamental_solution_radial_derivative(p, r) * cosang;
}

}  // namespace mfis
