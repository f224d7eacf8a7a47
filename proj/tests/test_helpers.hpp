// Shared helpers for the test suites.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "mfis/quadrature.hpp"

namespace mfis::testing {

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

/// High-resolution Gauss-Legendre quadrature of a scalar function, the
/// independent 1-D oracle used against grid quadratures.
inline double integrate(const std::function<double(double)>& fn, double a, double b,
                        int count = 2000) {
    const Rule1D r = gauss_legendre_on(a, b, count);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * fn(r.nodes[i]);
    return acc;
}

/// Fourth-order central differences of a closed-form profile; used to build
/// derivative oracles without hand-expanding cutoff derivatives.
inline double fd1(const std::function<double(double)>& fn, double x, double h = 1e-4) {
    return (-fn(x + 2 * h) + 8 * fn(x + h) - 8 * fn(x - h) + fn(x - 2 * h)) / (12 * h);
}

inline double fd2(const std::function<double(double)>& fn, double x, double h = 1e-4) {
    return (-fn(x + 2 * h) + 16 * fn(x + h) - 30 * fn(x) + 16 * fn(x - h) - fn(x - 2 * h)) /
           (12 * h * h);
}

}  // namespace mfis::testing
