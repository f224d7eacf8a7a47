// Gauss-Legendre rules, product quadrature on spheres, and frequency grids.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mfis/grid.hpp"

namespace mfis {

struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1], Newton iteration on the Legendre
/// recurrence. Accurate to ~1e-15 for any practical count.
inline Rule1D gauss_legendre(int count) {
    if (count < 1) throw std::invalid_argument("gauss_legendre: count must be >= 1");
    Rule1D r;
    r.nodes.resize(count);
    r.weights.resize(count);
    const int half = (count + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (count + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= count; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = count * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[count - 1 - i] = x;
        r.weights[i] = w;
        r.weights[count - 1 - i] = w;
    }
    return r;
}

/// Affine image of the Gauss-Legendre rule on [a, b].
inline Rule1D gauss_legendre_on(double a, double b, int count) {
    Rule1D base = gauss_legendre(count);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < count; ++i) {
        base.nodes[i] = mid + half * base.nodes[i];
        base.weights[i] *= half;
    }
    return base;
}

inline double unit_sphere_area(int n) {
    return 2.0 * std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n);
}

inline double sphere_area(int n, double R) { return unit_sphere_area(n) * std::pow(R, n - 1); }

inline double ball_volume(int n, double R) { return sphere_area(n, R) * R / n; }

/// Quadrature nodes and weights on the sphere |x| = R. Weights sum to the
/// surface area; outward normals are nodes/R. Node coordinates are stored
/// row-major (count x n).
struct SphereRule {
    int n = 2;
    double R = 1.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t count() const { return weights.size(); }
    const double* node(std::size_t i) const { return nodes.data() + i * n; }
};

/// Product-angle rule: uniform (trapezoidal) on the circle for n=2; for
/// n >= 3, Gauss-Legendre in each polar angle with the matching sin-power
/// factor and uniform nodes in the final azimuthal angle. Total node count
/// is resolution^(n-1).
inline SphereRule make_sphere_rule(int n, double R, int resolution) {
    if (n < 2) throw std::invalid_argument("make_sphere_rule: dimension must be >= 2");
    if (R <= 0.0) throw std::invalid_argument("make_sphere_rule: radius must be positive");
    if (resolution < 8) throw std::invalid_argument("make_sphere_rule: resolution must be >= 8");

    SphereRule rule;
    rule.n = n;
    rule.R = R;

    if (n == 2) {
        rule.nodes.resize(2 * static_cast<std::size_t>(resolution));
        rule.weights.assign(resolution, 2.0 * pi * R / resolution);
        for (int i = 0; i < resolution; ++i) {
            const double th = 2.0 * pi * i / resolution;
            rule.nodes[2 * i] = R * std::cos(th);
            rule.nodes[2 * i + 1] = R * std::sin(th);
        }
        return rule;
    }

    const Rule1D polar = gauss_legendre_on(0.0, pi, resolution);
    const int polar_count = n - 2;
    std::vector<int> idx(polar_count, 0);
    const double azi_w = 2.0 * pi / resolution;
    const double Rpow = std::pow(R, n - 1);

    // Odometer over the polar angles; innermost loop over the azimuth.
    while (true) {
        double wprod = 1.0;
        std::vector<double> sines(polar_count), coses(polar_count);
        for (int a = 0; a < polar_count; ++a) {
            const double phi = polar.nodes[idx[a]];
            sines[a] = std::sin(phi);
            coses[a] = std::cos(phi);
            wprod *= polar.weights[idx[a]] * std::pow(sines[a], n - 2 - a);
        }
        for (int j = 0; j < resolution; ++j) {
            const double phi_last = 2.0 * pi * j / resolution;
            double prod = 1.0;
            for (int a = 0; a < n; ++a) {
                double coord;
                if (a < polar_count) {
                    coord = prod * coses[a];
                    prod *= sines[a];
                } else if (a == n - 2) {
                    coord = prod * std::cos(phi_last);
                } else {
                    coord = prod * std::sin(phi_last);
                }
                rule.nodes.push_back(R * coord);
            }
            rule.weights.push_back(Rpow * wprod * azi_w);
        }
        int a = polar_count - 1;
        for (; a >= 0; --a) {
            if (++idx[a] < resolution) break;
            idx[a] = 0;
        }
        if (a < 0) break;
    }
    return rule;
}

/// Directions and weights on the unit sphere S^{n-1}; weights sum to its
/// surface area.
struct DirectionSet {
    int n = 2;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t count() const { return weights.size(); }
    const double* dir(std::size_t i) const { return nodes.data() + i * n; }
};

inline DirectionSet make_direction_set(int n, int resolution) {
    SphereRule rule = make_sphere_rule(n, 1.0, resolution);
    DirectionSet d;
    d.n = n;
    d.nodes = std::move(rule.nodes);
    d.weights = std::move(rule.weights);
    return d;
}

/// Wave-number nodes with quadrature weights for integrals over (0, K].
struct FrequencyGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    double K = 0.0;

    std::size_t count() const { return nodes.size(); }

    /// Gauss-Legendre nodes on (0, K].
    static FrequencyGrid gauss(double K, int count) {
        if (K <= 0.0) throw std::invalid_argument("FrequencyGrid: K must be positive");
        Rule1D r = gauss_legendre_on(0.0, K, count);
        FrequencyGrid g;
        g.nodes = std::move(r.nodes);
        g.weights = std::move(r.weights);
        g.K = K;
        return g;
    }

    /// Explicit nodes (sorted ascending on construction) with composite
    /// trapezoid weights over their hull. Intended for datasets evaluated at
    /// hand-picked frequencies; quadrature over (0, K] is only meaningful
    /// when the nodes cover the band.
    static FrequencyGrid from_nodes(std::vector<double> nodes) {
        if (nodes.empty()) throw std::invalid_argument("FrequencyGrid: empty node list");
        std::sort(nodes.begin(), nodes.end());
        if (nodes.front() <= 0.0)
            throw std::invalid_argument("FrequencyGrid: nodes must be positive");
        FrequencyGrid g;
        g.K = nodes.back();
        const std::size_t N = nodes.size();
        g.weights.assign(N, 0.0);
        for (std::size_t i = 0; i + 1 < N; ++i) {
            const double dx = 0.5 * (nodes[i + 1] - nodes[i]);
            g.weights[i] += dx;
            g.weights[i + 1] += dx;
        }
        if (N == 1) g.weights[0] = 1.0;
        g.nodes = std::move(nodes);
        return g;
    }
};

}  // namespace mfis
