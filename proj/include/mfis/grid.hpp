// Uniform Cartesian grids on [-R, R]^n and multi-index iteration helpers.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfis {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Uniform tensor grid covering [-R, R]^n with an odd number of points per
/// axis, so the origin is always a node. Spacing h = 2R/(m-1).
struct GridSpec {
    int n = 2;       // space dimension
    double R = 1.0;  // half-width of the covered cube / support ball radius
    int m = 3;       // points per axis, odd

    GridSpec() = default;
    GridSpec(int n_, double R_, int m_) : n(n_), R(R_), m(m_) {
        if (n < 2) throw std::invalid_argument("GridSpec: dimension n must be >= 2");
        if (R <= 0.0) throw std::invalid_argument("GridSpec: radius R must be positive");
        if (m < 3 || m % 2 == 0)
            throw std::invalid_argument("GridSpec: points per axis m must be odd and >= 3");
    }

    double h() const { return 2.0 * R / (m - 1); }
    double coord(int i) const { return -R + h() * i; }

    std::size_t count() const {
        std::size_t c = 1;
        for (int a = 0; a < n; ++a) c *= static_cast<std::size_t>(m);
        return c;
    }

    /// Squared distance of node `idx` (row-major flat index) from the origin.
    double radius2(std::size_t idx) const {
        double r2 = 0.0;
        for (int a = n - 1; a >= 0; --a) {
            const int ia = static_cast<int>(idx % m);
            idx /= m;
            const double x = coord(ia);
            r2 += x * x;
        }
        return r2;
    }

    void decode(std::size_t idx, int* digits) const {
        for (int a = n - 1; a >= 0; --a) {
            digits[a] = static_cast<int>(idx % m);
            idx /= m;
        }
    }

    bool operator==(const GridSpec& o) const { return n == o.n && R == o.R && m == o.m; }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

namespace detail {

/// Row-major odometer over {0..m-1}^n. advance() returns false after the
/// last multi-index.
struct Odometer {
    int n, m;
    std::array<int, 16> digits{};

    Odometer(int n_, int m_) : n(n_), m(m_) {
        if (n > 16) throw std::invalid_argument("Odometer: dimension too large");
        digits.fill(0);
    }

    bool advance() {
        for (int a = n - 1; a >= 0; --a) {
            if (++digits[a] < m) return true;
            digits[a] = 0;
        }
        return false;
    }
};

/// Product trapezoid weight of a node: 1/2 per axis at the array ends.
inline double trapezoid_weight(const GridSpec& g, const int* digits) {
    double w = 1.0;
    for (int a = 0; a < g.n; ++a)
        if (digits[a] == 0 || digits[a] == g.m - 1) w *= 0.5;
    return w;
}

}  // namespace detail

}  // namespace mfis
