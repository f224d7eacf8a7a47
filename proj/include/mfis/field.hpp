// Compactly supported complex source fields on Cartesian grids: test-source
// generators, iterated Laplacians and discrete Sobolev norms.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "mfis/grid.hpp"

namespace mfis {

/// A complex source sampled on a GridSpec. Nodes with |x| >= R are kept at
/// exact zero by every operation in this module (compact support in the open
/// ball). `d` is the smoothness order the field is declared to have; it is
/// the budget for iterated Laplacians and the order of sobolev_norm.
struct SourceField {
    GridSpec spec;
    std::vector<cplx> values;
    int d = 1;
    std::string meta;

    SourceField() = default;
    SourceField(const GridSpec& s, int d_, std::string meta_ = "")
        : spec(s), values(s.count(), cplx{0.0, 0.0}), d(d_), meta(std::move(meta_)) {
        if (d < 1) throw std::invalid_argument("SourceField: smoothness order d must be >= 1");
    }
};

namespace detail {

/// Smooth transition equal to 1 at t<=0 and 0 at t>=1: exp(1 - 1/(1-t^2)).
inline double cutoff_profile(double t) {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

/// Radial cutoff: 1 on r <= r0, 0 on r >= r1, cutoff_profile between.
inline double radial_cutoff(double r, double r0, double r1) {
    return cutoff_profile((r - r0) / (r1 - r0));
}

/// Cardinal B-spline of order `order` (degree order-1) on [0, order],
/// Cox-de Boor recurrence.
inline double bspline(int order, double x) {
    if (order == 1) return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0;
    const double k = static_cast<double>(order);
    return (x * bspline(order - 1, x) + (k - x) * bspline(order - 1, x - 1.0)) / (k - 1.0);
}

/// Zero every node with |x| >= R.
inline void enforce_support(SourceField& f) {
    const GridSpec& g = f.spec;
    const double R2 = g.R * g.R;
    Odometer it(g.n, g.m);
    std::size_t idx = 0;
    do {
        double r2 = 0.0;
        for (int a = 0; a < g.n; ++a) {
            const double x = g.coord(it.digits[a]);
            r2 += x * x;
        }
        if (r2 >= R2) f.values[idx] = cplx{0.0, 0.0};
        ++idx;
    } while (it.advance());
}

inline void fill_radial(SourceField& f, const std::function<double(double)>& profile) {
    const GridSpec& g = f.spec;
    Odometer it(g.n, g.m);
    std::size_t idx = 0;
    do {
        double r2 = 0.0;
        for (int a = 0; a < g.n; ++a) {
            const double x = g.coord(it.digits[a]);
            r2 += x * x;
        }
        const double r = std::sqrt(r2);
        f.values[idx] = (r < g.R) ? cplx{profile(r), 0.0} : cplx{0.0, 0.0};
        ++idx;
    } while (it.advance());
}

}  // namespace detail

/// Mollified Gaussian bump amplitude*exp(-|x-center|^2 / (2 width^2)) times a
/// smooth radial cutoff that is 1 on |x| <= R-2*width and 0 on |x| >= R-width.
/// Values below 1e-300 in magnitude are flushed to exact zero.
inline SourceField make_bump(const GridSpec& spec, const std::vector<double>& center,
                             double width, cplx amplitude, int d = 1) {
    if (static_cast<int>(center.size()) != spec.n)
        throw std::invalid_argument("make_bump: center dimension mismatch");
    if (width <= 0.0) throw std::invalid_argument("make_bump: width must be positive");
    double c2 = 0.0;
    for (double c : center) c2 += c * c;
    if (std::sqrt(c2) + 3.0 * width >= spec.R)
        throw std::invalid_argument("make_bump: support condition |center| + 3*width < R violated");

    SourceField f(spec, d, "bump");
    const double r0 = spec.R - 2.0 * width;
    const double r1 = spec.R - width;
    const double inv2w2 = 1.0 / (2.0 * width * width);

    detail::Odometer it(spec.n, spec.m);
    std::size_t idx = 0;
    do {
        double q2 = 0.0, r2 = 0.0;
        for (int a = 0; a < spec.n; ++a) {
            const double x = spec.coord(it.digits[a]);
            const double dx = x - center[a];
            q2 += dx * dx;
            r2 += x * x;
        }
        const double chi = detail::radial_cutoff(std::sqrt(r2), r0, r1);
        cplx v = amplitude * (std::exp(-q2 * inv2w2) * chi);
        if (std::abs(v) < 1e-300) v = cplx{0.0, 0.0};
        f.values[idx] = v;
        ++idx;
    } while (it.advance());
    detail::enforce_support(f);
    return f;
}

/// Radial source whose profile is a B-spline of order 2d: maximal smoothness
/// C^{2d-2} with a jump in the (2d-1)-th radial derivative. Supported on
/// |x| <= radius < R. For d=1 this is the radial hat 1 - r/radius.
inline SourceField make_radial_spline(const GridSpec& spec, int d, double radius,
                                      double amplitude = 1.0) {
    if (d < 1) throw std::invalid_argument("make_radial_spline: d must be >= 1");
    if (radius <= 0.0 || radius >= spec.R)
        throw std::invalid_argument("make_radial_spline: need 0 < radius < R");
    SourceField f(spec, d, "radial-spline");
    const int order = 2 * d;
    const double dd = static_cast<double>(d);
    const double peak = detail::bspline(order, dd);
    detail::fill_radial(f, [&](double r) {
        if (r >= radius) return 0.0;
        return amplitude * detail::bspline(order, dd * (1.0 + r / radius)) / peak;
    });
    return f;
}

namespace detail {

/// Apply the compact second difference (f(+h) - 2f + f(-h))/h^2 along axis
/// `axis`, zero extension outside the array.
inline std::vector<cplx> second_difference(const GridSpec& g, const std::vector<cplx>& v,
                                           int axis) {
    std::vector<cplx> out(v.size());
    const double ih2 = 1.0 / (g.h() * g.h());
    std::size_t stride = 1;
    for (int a = g.n - 1; a > axis; --a) stride *= g.m;
    const std::size_t total = v.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
        const int ia = static_cast<int>((idx / stride) % g.m);
        const cplx up = (ia + 1 < g.m) ? v[idx + stride] : cplx{0.0, 0.0};
        const cplx dn = (ia > 0) ? v[idx - stride] : cplx{0.0, 0.0};
        out[idx] = (up - 2.0 * v[idx] + dn) * ih2;
    }
    return out;
}

/// Centered first difference (f(+h) - f(-h))/(2h) along `axis`.
inline std::vector<cplx> first_difference(const GridSpec& g, const std::vector<cplx>& v,
                                          int axis) {
    std::vector<cplx> out(v.size());
    const double i2h = 1.0 / (2.0 * g.h());
    std::size_t stride = 1;
    for (int a = g.n - 1; a > axis; --a) stride *= g.m;
    const std::size_t total = v.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
        const int ia = static_cast<int>((idx / stride) % g.m);
        const cplx up = (ia + 1 < g.m) ? v[idx + stride] : cplx{0.0, 0.0};
        const cplx dn = (ia > 0) ? v[idx - stride] : cplx{0.0, 0.0};
        out[idx] = (up - dn) * i2h;
    }
    return out;
}

/// Mixed partial D^alpha: per axis, alpha_a/2 compact second differences plus
/// one centered first difference when alpha_a is odd.
inline std::vector<cplx> mixed_derivative(const GridSpec& g, std::vector<cplx> v,
                                          const std::vector<int>& alpha) {
    for (int a = 0; a < g.n; ++a) {
        for (int q = 0; q < alpha[a] / 2; ++q) v = second_difference(g, v, a);
        if (alpha[a] % 2) v = first_difference(g, v, a);
    }
    return v;
}

inline double weighted_l2_sq(const GridSpec& g, const std::vector<cplx>& v) {
    double acc = 0.0;
    Odometer it(g.n, g.m);
    std::size_t idx = 0;
    do {
        acc += trapezoid_weight(g, it.digits.data()) * std::norm(v[idx]);
        ++idx;
    } while (it.advance());
    return acc * std::pow(g.h(), g.n);
}

template <typename F>
inline void for_each_multi_index(int n, int budget, std::vector<int>& alpha, int axis, F&& fn) {
    if (axis == n) {
        fn(alpha);
        return;
    }
    for (int a = 0; a <= budget; ++a) {
        alpha[axis] = a;
        for_each_multi_index(n, budget - a, alpha, axis + 1, fn);
    }
    alpha[axis] = 0;
}

}  // namespace detail

/// Iterated discrete Laplacian: `iterations` applications of the standard
/// second-order centered stencil. Rejects iterations > f.d (smoothness
/// budget) and grids too coarse for the stencil reach.
inline SourceField laplacian_power(const SourceField& f, int iterations) {
    if (iterations < 0) throw std::invalid_argument("laplacian_power: iterations must be >= 0");
    if (iterations > f.d)
        throw std::invalid_argument("laplacian_power: iterations exceed smoothness order d");
    if (f.spec.m < 2 * iterations + 3)
        throw std::invalid_argument("laplacian_power: grid too coarse for stencil");
    SourceField out = f;
    for (int it = 0; it < iterations; ++it) {
        std::vector<cplx> acc(out.values.size(), cplx{0.0, 0.0});
        for (int a = 0; a < out.spec.n; ++a) {
            const std::vector<cplx> da = detail::second_difference(out.spec, out.values, a);
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += da[i];
        }
        out.values = std::move(acc);
        detail::enforce_support(out);
    }
    return out;
}

/// Trapezoidal-rule L2 norm of the field.
inline double l2_norm(const SourceField& f) {
    return std::sqrt(detail::weighted_l2_sq(f.spec, f.values));
}

/// Discrete H^{2d} norm: (sum over |alpha| <= 2d of ||D^alpha f||_{L2}^2)^{1/2}
/// with centered finite differences and trapezoidal quadrature. This is the
/// norm bound M consumed by the stability calculators.
inline double sobolev_norm(const SourceField& f) {
    const int order = 2 * f.d;
    if (f.spec.m < 2 * f.d + 3)
        throw std::invalid_argument("sobolev_norm: grid too coarse for order-2d stencils");
    double acc = 0.0;
    std::vector<int> alpha(f.spec.n, 0);
    detail::for_each_multi_index(f.spec.n, order, alpha, 0, [&](const std::vector<int>& a) {
        const std::vector<cplx> da = detail::mixed_derivative(f.spec, f.values, a);
        acc += detail::weighted_l2_sq(f.spec, da);
    });
    return std::sqrt(acc);
}

/// a*f + b*g on a common grid.
inline SourceField lin_comb(cplx a, const SourceField& f, cplx b, const SourceField& g) {
    if (f.spec != g.spec) throw std::invalid_argument("lin_comb: grid mismatch");
    SourceField out = f;
    out.meta = "lin_comb";
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = a * f.values[i] + b * g.values[i];
    return out;
}

}  // namespace mfis
