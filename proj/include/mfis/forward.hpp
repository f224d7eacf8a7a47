// Synthetic multi-frequency boundary Cauchy data: kernel-convolution forward
// solves on sphere rules, frequency sweeps, and seeded measurement noise.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mfis/field.hpp"
#include "mfis/quadrature.hpp"
#include "mfis/specfun.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mfis {

/// Boundary traces (u, normal derivative of u) at sphere-rule nodes, one row
/// per wave number. Rows are stored frequency-major. The frequency grid
/// carries the radial quadrature weights used for band integrals over (0, K].
struct BoundaryDataset {
    SphereRule rule;
    FrequencyGrid freqs;
    std::vector<cplx> u;   // freqs.count() x rule.count()
    std::vector<cplx> du;  // same shape
    double K = 0.0;
    std::string noise_meta = "none";

    int n() const { return rule.n; }
    double R() const { return rule.R; }
    std::size_t node_count() const { return rule.count(); }
    std::size_t freq_count() const { return freqs.count(); }
    const cplx* u_row(std::size_t fi) const { return u.data() + fi * node_count(); }
    const cplx* du_row(std::size_t fi) const { return du.data() + fi * node_count(); }
};

struct ForwardOptions {
    enum class Kernel { automatic, tabulated, direct };
    Kernel kernel = Kernel::automatic;
    std::size_t block = 16384;          // support nodes per cache block
    double table_target = 1e-12;        // relative interpolation error target
};

namespace detail {

/// Nonzero field nodes in structure-of-arrays layout.
struct SupportList {
    int n = 0;
    std::vector<std::vector<double>> coords;  // coords[axis][i]
    std::vector<double> fre, fim;
    double max_radius = 0.0;
    double cell = 0.0;  // h^n

    std::size_t count() const { return fre.size(); }
};

inline SupportList build_support(const SourceField& f) {
    const GridSpec& g = f.spec;
    SupportList s;
    s.n = g.n;
    s.coords.resize(g.n);
    s.cell = std::pow(g.h(), g.n);
    double maxr2 = 0.0;
    Odometer it(g.n, g.m);
    std::size_t idx = 0;
    do {
        const cplx v = f.values[idx];
        ++idx;
        if (v.real() == 0.0 && v.imag() == 0.0) continue;
        double r2 = 0.0;
        for (int a = 0; a < g.n; ++a) {
            const double x = g.coord(it.digits[a]);
            s.coords[a].push_back(x);
            r2 += x * x;
        }
        s.fre.push_back(v.real());
        s.fim.push_back(v.imag());
        if (r2 > maxr2) maxr2 = r2;
    } while (it.advance());
    s.max_radius = std::sqrt(maxr2);
    return s;
}

/// Piecewise cubic Hermite table of Phi_k and Phi_k' over [rlo, rhi]. Node
/// derivatives come from the closed-form radial derivative and the radial
/// Helmholtz ODE Phi'' = -(n-1)/r Phi' - k^2 Phi, so evaluation needs no
/// transcendentals. Spacing is set so the interpolation error stays below
/// `target` relative to the kernel magnitude.
struct RadialKernelTable {
    double rlo = 0.0, inv_dx = 0.0, dx = 0.0;
    std::vector<double> pre, pim;    // Phi at nodes
    std::vector<double> dre, dim_;   // Phi' at nodes
    std::vector<double> d2re, d2im;  // Phi'' at nodes

    RadialKernelTable(const KernelParams& p, double rlo_, double rhi, double target) {
        rlo = rlo_;
        const double scale = p.k + 4.0 * (p.n + 1) / rlo;  // local frequency of Phi
        const double step = std::pow(384.0 * target, 0.25) / scale;
        const std::size_t count =
            std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil((rhi - rlo) / step)) + 2);
        dx = (rhi - rlo) / static_cast<double>(count - 1);
        inv_dx = 1.0 / dx;
        pre.resize(count);
        pim.resize(count);
        dre.resize(count);
        dim_.resize(count);
        d2re.resize(count);
        d2im.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double r = rlo + dx * static_cast<double>(i);
            const cplx phi = fundamental_solution(p, r);
            const cplx dphi = fundamental_solution_radial_derivative(p, r);
            const cplx d2phi = -((p.n - 1) / r) * dphi - (p.k * p.k) * phi;
            pre[i] = phi.real();
            pim[i] = phi.imag();
            dre[i] = dphi.real();
            dim_[i] = dphi.imag();
            d2re[i] = d2phi.real();
            d2im[i] = d2phi.imag();
        }
    }

    // Evaluates Phi and Phi' at radius r (must lie within the table range).
    void eval(double r, double& phr, double& phi, double& dphr, double& dphi) const {
        double s = (r - rlo) * inv_dx;
        std::size_t i = static_cast<std::size_t>(s);
        if (i >= pre.size() - 1) i = pre.size() - 2;
        const double t = s - static_cast<double>(i);
        const double omt = 1.0 - t;
        const double h00 = (1.0 + 2.0 * t) * omt * omt;
        const double h10 = t * omt * omt * dx;
        const double h01 = t * t * (3.0 - 2.0 * t);
        const double h11 = t * t * (t - 1.0) * dx;
        phr = h00 * pre[i] + h10 * dre[i] + h01 * pre[i + 1] + h11 * dre[i + 1];
        phi = h00 * pim[i] + h10 * dim_[i] + h01 * pim[i + 1] + h11 * dim_[i + 1];
        dphr = h00 * dre[i] + h10 * d2re[i] + h01 * dre[i + 1] + h11 * d2re[i + 1];
        dphi = h00 * dim_[i] + h10 * d2im[i] + h01 * dim_[i + 1] + h11 * d2im[i + 1];
    }
};

inline void forward_solve_support(const SupportList& sup, double grid_h, double k,
                                  const SphereRule& rule, const ForwardOptions& opts,
                                  std::vector<cplx>& u_out, std::vector<cplx>& du_out) {
    const int n = sup.n;
    const double R = rule.R;
    const std::size_t nx = rule.count();
    const std::size_t ny = sup.count();
    u_out.assign(nx, cplx{0.0, 0.0});
    du_out.assign(nx, cplx{0.0, 0.0});
    if (ny == 0) return;

    const double rmin = R - sup.max_radius;  // least possible node-pair distance
    if (rmin < 0.5 * grid_h)
        throw std::domain_error(
            "forward_solve: support reaches within h/2 of the measurement sphere "
            "(R too tight for the grid)");
    const double rmax = R + sup.max_radius;

    const KernelParams params(n, k);
    bool tabulate = opts.kernel == ForwardOptions::Kernel::tabulated;
    if (opts.kernel == ForwardOptions::Kernel::automatic)
        tabulate = nx * ny >= (std::size_t{1} << 22);
    std::optional<RadialKernelTable> table;
    if (tabulate) table.emplace(params, 0.999 * rmin, 1.001 * rmax, opts.table_target);

    std::vector<double> ur(nx, 0.0), ui(nx, 0.0), vr(nx, 0.0), vi(nx, 0.0);
    const std::size_t block = std::max<std::size_t>(opts.block, 64);

    for (std::size_t b0 = 0; b0 < ny; b0 += block) {
        const std::size_t b1 = std::min(ny, b0 + block);
        const std::size_t bn = b1 - b0;
#ifdef _OPENMP
#pragma omp parallel
#endif
        {
            std::vector<double> dist2(bn), dots(bn);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
            for (std::int64_t xi = 0; xi < static_cast<std::int64_t>(nx); ++xi) {
                const double* x = rule.node(static_cast<std::size_t>(xi));
                for (std::size_t j = 0; j < bn; ++j) {
                    dist2[j] = 0.0;
                    dots[j] = 0.0;
                }
                for (int a = 0; a < n; ++a) {
                    const double xa = x[a];
                    const double* ya = sup.coords[a].data() + b0;
                    for (std::size_t j = 0; j < bn; ++j) {
                        const double d = xa - ya[j];
                        dist2[j] += d * d;
                        dots[j] += d * xa;
                    }
                }
                const double* fr = sup.fre.data() + b0;
                const double* fi = sup.fim.data() + b0;
                double sur = 0.0, sui = 0.0, svr = 0.0, svi = 0.0;
                if (table) {
                    for (std::size_t j = 0; j < bn; ++j) {
                        const double r = std::sqrt(dist2[j]);
                        double phr, phi, dphr, dphi;
                        table->eval(r, phr, phi, dphr, dphi);
                        const double c = dots[j] / (r * R);
                        sur += phr * fr[j] - phi * fi[j];
                        sui += phr * fi[j] + phi * fr[j];
                        svr += c * (dphr * fr[j] - dphi * fi[j]);
                        svi += c * (dphr * fi[j] + dphi * fr[j]);
                    }
                } else {
                    for (std::size_t j = 0; j < bn; ++j) {
                        const double r = std::sqrt(dist2[j]);
                        const cplx phi = fundamental_solution(params, r);
                        const cplx dphi = fundamental_solution_radial_derivative(params, r);
                        const double c = dots[j] / (r * R);
                        const cplx f{fr[j], fi[j]};
                        const cplx a1 = phi * f;
                        const cplx a2 = c * dphi * f;
                        sur += a1.real();
                        sui += a1.imag();
                        svr += a2.real();
                        svi += a2.imag();
                    }
                }
                ur[xi] += sur;
                ui[xi] += sui;
                vr[xi] += svr;
                vi[xi] += svi;
            }
        }
    }

    // u = -(Phi * f), the radiating solution of (Laplacian + k^2) u = f.
    for (std::size_t xi = 0; xi < nx; ++xi) {
        u_out[xi] = cplx{-ur[xi] * sup.cell, -ui[xi] * sup.cell};
        du_out[xi] = cplx{-vr[xi] * sup.cell, -vi[xi] * sup.cell};
    }
}

}  // namespace detail

/// Boundary traces of the radiating solution for one wave number:
/// u(x) = -sum_y Phi_k(|x-y|) f(y) h^n and its outward normal derivative,
/// evaluated at every node of the sphere rule.
inline std::pair<std::vector<cplx>, std::vector<cplx>> forward_solve(
    const SourceField& f, double k, const SphereRule& rule, const ForwardOptions& opts = {}) {
    if (rule.n != f.spec.n) throw std::invalid_argument("forward_solve: dimension mismatch");
    if (std::abs(rule.R - f.spec.R) > 1e-12 * std::max(1.0, f.spec.R))
        throw std::invalid_argument("forward_solve: rule radius must equal field radius");
    if (k <= 0.0) throw std::invalid_argument("forward_solve: wave number must be positive");
    const detail::SupportList sup = detail::build_support(f);
    std::vector<cplx> u, du;
    detail::forward_solve_support(sup, f.spec.h(), k, rule, opts, u, du);
    return {std::move(u), std::move(du)};
}

/// Stacks forward solves over all wave numbers of the frequency grid;
/// K = max frequency, noise_meta = "none".
inline BoundaryDataset sweep(const SourceField& f, const FrequencyGrid& freqs,
                             const SphereRule& rule, const ForwardOptions& opts = {}) {
    if (rule.n != f.spec.n) throw std::invalid_argument("sweep: dimension mismatch");
    if (std::abs(rule.R - f.spec.R) > 1e-12 * std::max(1.0, f.spec.R))
        throw std::invalid_argument("sweep: rule radius must equal field radius");
    BoundaryDataset data;
    data.rule = rule;
    data.freqs = freqs;
    data.K = freqs.K;
    data.noise_meta = "none";
    const std::size_t nx = rule.count();
    data.u.resize(freqs.count() * nx);
    data.du.resize(freqs.count() * nx);
    const detail::SupportList sup = detail::build_support(f);
    std::vector<cplx> u, du;
    for (std::size_t fi = 0; fi < freqs.count(); ++fi) {
        detail::forward_solve_support(sup, f.spec.h(), freqs.nodes[fi], rule, opts, u, du);
        std::copy(u.begin(), u.end(), data.u.begin() + fi * nx);
        std::copy(du.begin(), du.end(), data.du.begin() + fi * nx);
    }
    return data;
}

/// Convenience overload taking explicit wave numbers (sorted ascending).
inline BoundaryDataset sweep(const SourceField& f, const std::vector<double>& freqs,
                             const SphereRule& rule, const ForwardOptions& opts = {}) {
    return sweep(f, FrequencyGrid::from_nodes(freqs), rule, opts);
}

namespace detail {

/// Unit complex normal draws from a named, reproducible generator:
/// mt19937_64 mapped to (0,1] with a fixed 53-bit ladder, then Box-Muller.
struct ComplexNormalStream {
    std::mt19937_64 gen;

    explicit ComplexNormalStream(std::uint64_t seed) : gen(seed) {}

    double uniform01() {
        return (static_cast<double>(gen() >> 11) + 1.0) * 0x1p-53;
    }

    cplx next() {
        const double r = std::sqrt(-2.0 * std::log(uniform01()));
        const double th = 2.0 * pi * uniform01();
        // Normalized so E|eta|^2 = 1.
        return cplx{r * std::cos(th), r * std::sin(th)} / std::sqrt(2.0);
    }
};

inline double row_rms(const cplx* row, std::size_t count) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += std::norm(row[i]);
    return std::sqrt(acc / static_cast<double>(count));
}

}  // namespace detail

/// Multiplicative row-scaled complex Gaussian noise: each trace row gains
/// level * rms(row) * eta with eta a unit complex normal, independent streams
/// for u and du. level = 0 returns the dataset unchanged.
inline BoundaryDataset add_noise(const BoundaryDataset& data, double level, std::uint64_t seed) {
    if (level < 0.0) throw std::invalid_argument("add_noise: level must be nonnegative");
    if (level == 0.0) return data;
    BoundaryDataset out = data;
    const std::size_t nx = data.node_count();
    detail::ComplexNormalStream gu(seed);
    detail::ComplexNormalStream gdu(seed ^ 0x9e3779b97f4a7c15ull);
    for (std::size_t fi = 0; fi < data.freq_count(); ++fi) {
        const double su = level * detail::row_rms(data.u_row(fi), nx);
        const double sdu = level * detail::row_rms(data.du_row(fi), nx);
        for (std::size_t j = 0; j < nx; ++j) out.u[fi * nx + j] += su * gu.next();
        for (std::size_t j = 0; j < nx; ++j) out.du[fi * nx + j] += sdu * gdu.next();
    }
    out.noise_meta = "gaussian level=" + std::to_string(level) + " seed=" + std::to_string(seed);
    return out;
}

}  // namespace mfis
