// Fourier-side machinery: f-hat from boundary data or directly from the
// field, band energies of the spectrum (including complex band radius),
// tail-decay diagnostics, and truncated polar Fourier inversion.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfis/field.hpp"
#include "mfis/forward.hpp"
#include "mfis/quadrature.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mfis {

/// Largest spectral radius resolvable on the grid.
inline double nyquist_limit(const GridSpec& g) { return pi / g.h(); }

/// Samples of f-hat at polar nodes (radial node k_i, direction j), with the
/// radial and angular quadrature rules that produced them. Values are stored
/// frequency-major: vals[i * dirs.count() + j].
struct SpectralSamples {
    int n = 2;
    DirectionSet dirs;
    FrequencyGrid freqs;
    std::vector<cplx> vals;
    std::string source_meta;

    std::size_t dir_count() const { return dirs.count(); }
    std::size_t freq_count() const { return freqs.count(); }
};

namespace detail {

/// sum_x f(x) e^{-i scale_t (dir . x)} h^n for a batch of complex scales,
/// by per-axis contraction with trapezoid weights folded into the phase
/// tables. Exact separability over the tensor grid keeps the cost at one
/// multiply-add per grid node per scale.
inline std::vector<cplx> plane_wave_volume_batch(const SourceField& f, const double* dir,
                                                 const std::vector<cplx>& scales) {
    const GridSpec& g = f.spec;
    const int n = g.n;
    const int m = g.m;
    const std::size_t T = scales.size();
    if (T == 0) return {};

    // Phase tables W_a[i*T + t] = exp(-i scale_t dir_a x_i) * trapezoid(i).
    std::vector<std::vector<cplx>> tables(n);
    for (int a = 0; a < n; ++a) {
        tables[a].resize(static_cast<std::size_t>(m) * T);
        for (int i = 0; i < m; ++i) {
            const double x = g.coord(i);
            const double tw = (i == 0 || i == m - 1) ? 0.5 : 1.0;
            for (std::size_t t = 0; t < T; ++t) {
                const cplx e = -cplx{0.0, 1.0} * scales[t] * (dir[a] * x);
                tables[a][static_cast<std::size_t>(i) * T + t] = tw * std::exp(e);
            }
        }
    }

    // Contract the last axis: buf[o*T + t] = sum_i f[o*m + i] W_{n-1}[i*T + t].
    std::size_t outer = 1;
    for (int a = 0; a < n - 1; ++a) outer *= m;
    std::vector<cplx> buf(outer * T);
    const std::vector<cplx>& wlast = tables[n - 1];
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t o = 0; o < static_cast<std::int64_t>(outer); ++o) {
        const cplx* frow = f.values.data() + static_cast<std::size_t>(o) * m;
        cplx* acc = buf.data() + static_cast<std::size_t>(o) * T;
        std::fill(acc, acc + T, cplx{0.0, 0.0});
        for (int i = 0; i < m; ++i) {
            const cplx fv = frow[i];
            if (fv.real() == 0.0 && fv.imag() == 0.0) continue;
            const cplx* w = wlast.data() + static_cast<std::size_t>(i) * T;
            for (std::size_t t = 0; t < T; ++t) acc[t] += fv * w[t];
        }
    }

    // Remaining axes, innermost last.
    for (int a = n - 2; a >= 0; --a) {
        outer /= m;
        std::vector<cplx> next(outer * T, cplx{0.0, 0.0});
        const std::vector<cplx>& w = tables[a];
        for (std::size_t o = 0; o < outer; ++o) {
            cplx* acc = next.data() + o * T;
            for (int i = 0; i < m; ++i) {
                const cplx* src = buf.data() + (o * m + i) * T;
                const cplx* wi = w.data() + static_cast<std::size_t>(i) * T;
                for (std::size_t t = 0; t < T; ++t) acc[t] += src[t] * wi[t];
            }
        }
        buf = std::move(next);
    }

    const double cell = std::pow(g.h(), n);
    for (std::size_t t = 0; t < T; ++t) buf[t] *= cell;
    buf.resize(T);
    return buf;
}

}  // namespace detail

/// Trapezoidal quadrature of the Fourier integral of f at frequency xi.
/// The independent volume-side route; the boundary route below must agree
/// with it up to quadrature and forward-solve error.
inline cplx fhat_direct(const SourceField& f, const std::vector<double>& xi) {
    if (static_cast<int>(xi.size()) != f.spec.n)
        throw std::invalid_argument("fhat_direct: frequency dimension mismatch");
    return detail::plane_wave_volume_batch(f, xi.data(), {cplx{1.0, 0.0}})[0];
}

/// f-hat(k dir) recovered from boundary Cauchy data:
/// sum over sphere nodes of e^{-i xi.x} (du + i (xi.nu) u) weight,
/// with xi = freqs[k_index] * dir and nu the outward normal x/R.
inline cplx fhat_from_boundary(const BoundaryDataset& data, std::size_t k_index,
                               const std::vector<double>& dir) {
    if (k_index >= data.freq_count())
        throw std::invalid_argument("fhat_from_boundary: frequency index out of range");
    if (static_cast<int>(dir.size()) != data.n())
        throw std::invalid_argument("fhat_from_boundary: direction dimension mismatch");
    const double k = data.freqs.nodes[k_index];
    const int n = data.n();
    const double R = data.R();
    const cplx* u = data.u_row(k_index);
    const cplx* du = data.du_row(k_index);
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < data.node_count(); ++j) {
        const double* x = data.rule.node(j);
        double dot = 0.0, dotn = 0.0;
        for (int a = 0; a < n; ++a) {
            dot += dir[a] * x[a];
            dotn += dir[a] * (x[a] / R);
        }
        const cplx phase = std::polar(1.0, -k * dot);
        acc += phase * (du[j] + cplx{0.0, k * dotn} * u[j]) * data.rule.weights[j];
    }
    return acc;
}

/// Spectra over the dataset's own frequency nodes (the boundary route).
inline SpectralSamples assemble_spectra(const BoundaryDataset& data, const DirectionSet& dirs) {
    if (dirs.n != data.n()) throw std::invalid_argument("assemble_spectra: dimension mismatch");
    SpectralSamples s;
    s.n = data.n();
    s.dirs = dirs;
    s.freqs = data.freqs;
    s.source_meta = "boundary";
    const std::size_t nd = dirs.count();
    s.vals.resize(data.freq_count() * nd);
    for (std::size_t fi = 0; fi < data.freq_count(); ++fi) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::int64_t j = 0; j < static_cast<std::int64_t>(nd); ++j) {
            std::vector<double> d(dirs.dir(j), dirs.dir(j) + dirs.n);
            s.vals[fi * nd + j] = fhat_from_boundary(data, fi, d);
        }
    }
    return s;
}

/// Spectra straight from the field (the volume route). Radial nodes above
/// the grid Nyquist limit are rejected: the discrete transform is
/// meaningless there.
inline SpectralSamples assemble_spectra(const SourceField& f, const DirectionSet& dirs,
                                        const FrequencyGrid& freqs) {
    if (dirs.n != f.spec.n) throw std::invalid_argument("assemble_spectra: dimension mismatch");
    if (!freqs.nodes.empty() && freqs.nodes.back() > nyquist_limit(f.spec))
        throw std::invalid_argument("assemble_spectra: radial rule exceeds grid Nyquist limit");
    SpectralSamples s;
    s.n = f.spec.n;
    s.dirs = dirs;
    s.freqs = freqs;
    s.source_meta = "direct";
    const std::size_t nd = dirs.count();
    const std::size_t nf = freqs.count();
    s.vals.resize(nf * nd);
    std::vector<cplx> scales(nf);
    for (std::size_t i = 0; i < nf; ++i) scales[i] = cplx{freqs.nodes[i], 0.0};
    for (std::size_t j = 0; j < nd; ++j) {
        const std::vector<cplx> col = detail::plane_wave_volume_batch(f, dirs.dir(j), scales);
        for (std::size_t i = 0; i < nf; ++i) s.vals[i * nd + j] = col[i];
    }
    return s;
}

namespace detail {

/// Barycentric Lagrange interpolation over the stored radial nodes; weights
/// are computed through log magnitudes so large node counts cannot overflow.
struct RadialInterpolant {
    const SpectralSamples* samples;
    std::vector<double> w;

    explicit RadialInterpolant(const SpectralSamples& s) : samples(&s) {
        const std::vector<double>& x = s.freqs.nodes;
        const std::size_t N = x.size();
        if (N == 0) throw std::invalid_argument("RadialInterpolant: empty radial rule");
        std::vector<double> lw(N, 0.0);
        std::vector<int> sign(N, 1);
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = 0; j < N; ++j) {
                if (i == j) continue;
                const double d = x[i] - x[j];
                lw[i] -= std::log(std::abs(d));
                if (d < 0.0) sign[i] = -sign[i];
            }
        }
        const double peak = *std::max_element(lw.begin(), lw.end());
        w.resize(N);
        for (std::size_t i = 0; i < N; ++i) w[i] = sign[i] * std::exp(lw[i] - peak);
    }

    /// Interpolation coefficients c_i at radius k: fhat(k, j) = sum_i c_i vals[i][j].
    std::vector<double> coefficients(double k) const {
        const std::vector<double>& x = samples->freqs.nodes;
        const std::size_t N = x.size();
        std::vector<double> c(N, 0.0);
        const double scale = std::max(1.0, std::abs(x.back()));
        for (std::size_t i = 0; i < N; ++i) {
            if (std::abs(k - x[i]) < 1e-14 * scale) {
                c[i] = 1.0;
                return c;
            }
        }
        double den = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            c[i] = w[i] / (k - x[i]);
            den += c[i];
        }
        for (std::size_t i = 0; i < N; ++i) c[i] /= den;
        return c;
    }

    /// fhat at radius k for every direction.
    std::vector<cplx> row(double k) const {
        const std::vector<double> c = coefficients(k);
        const std::size_t nd = samples->dir_count();
        std::vector<cplx> out(nd, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0.0) continue;
            const cplx* vrow = samples->vals.data() + i * nd;
            for (std::size_t j = 0; j < nd; ++j) out[j] += c[i] * vrow[j];
        }
        return out;
    }
};

}  // namespace detail

/// Energy of f-hat inside the ball of radius s: polar quadrature with the
/// radial rule remapped onto (0, s] (the k = s t substitution) and the
/// stored samples interpolated radially.
inline double lowpass_energy(const SpectralSamples& samples, double s) {
    if (s < 0.0) throw std::invalid_argument("lowpass_energy: radius must be nonnegative");
    if (s == 0.0) return 0.0;
    const double kmax = samples.freqs.nodes.back();
    if (s > kmax * (1.0 + 1e-12))
        throw std::invalid_argument("lowpass_energy: radius exceeds the sampled band");
    const detail::RadialInterpolant interp(samples);
    const Rule1D radial = gauss_legendre_on(0.0, s, static_cast<int>(samples.freq_count()));
    const int n = samples.n;
    double acc = 0.0;
    for (std::size_t t = 0; t < radial.nodes.size(); ++t) {
        const double k = radial.nodes[t];
        const std::vector<cplx> row = interp.row(k);
        double ang = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j)
            ang += samples.dirs.weights[j] * std::norm(row[j]);
        acc += radial.weights[t] * std::pow(k, n - 1) * ang;
    }
    return acc;
}

/// Energy of f-hat over s < |xi| <= cutoff, same remapped-rule scheme. The
/// neglected tail beyond the cutoff admits the analytic bound returned by
/// tail_truncation_bar.
inline double tail_energy(const SpectralSamples& samples, double s, double cutoff) {
    if (s < 0.0) throw std::invalid_argument("tail_energy: radius must be nonnegative");
    if (cutoff <= s) throw std::invalid_argument("tail_energy: cutoff must exceed s");
    const double kmax = samples.freqs.nodes.back();
    if (cutoff > kmax * (1.0 + 1e-12))
        throw std::invalid_argument("tail_energy: cutoff exceeds the sampled band");
    const detail::RadialInterpolant interp(samples);
    const Rule1D radial = gauss_legendre_on(s, cutoff, static_cast<int>(samples.freq_count()));
    const int n = samples.n;
    double acc = 0.0;
    for (std::size_t t = 0; t < radial.nodes.size(); ++t) {
        const double k = radial.nodes[t];
        const std::vector<cplx> row = interp.row(k);
        double ang = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j)
            ang += samples.dirs.weights[j] * std::norm(row[j]);
        acc += radial.weights[t] * std::pow(k, n - 1) * ang;
    }
    return acc;
}

/// Analytic bound on the spectrum energy beyond `cutoff` for a source of
/// smoothness order d and Sobolev bound M: M^2 cutoff^{-(4d-n)} / (4d-n),
/// up to the (existential) constant of the tail estimate.
inline double tail_truncation_bar(double M, int d, int n, double cutoff) {
    if (4 * d <= n) throw std::invalid_argument("tail_truncation_bar: requires 4d > n");
    if (cutoff <= 0.0) throw std::invalid_argument("tail_truncation_bar: cutoff must be positive");
    const double expo = 4.0 * d - n;
    return M * M / (expo * std::pow(cutoff, expo));
}

/// Entire extension of the lowpass energy to a complex band radius:
/// s^n * sum_dirs w_j * int_0^1 t^{n-1} A(s t) B(s t) dt evaluated verbatim,
/// with A(z) = integral of f e^{-i z dir.x} and B(z) = integral of
/// conj(f) e^{+i z dir.x} (so B(z) = conj(A(conj z))). For real s this
/// agrees with lowpass_energy up to cross-quadrature error.
inline cplx lowpass_energy_complex(const SourceField& f, const DirectionSet& dirs, cplx s,
                                   int radial_count = 64) {
    if (dirs.n != f.spec.n)
        throw std::invalid_argument("lowpass_energy_complex: dimension mismatch");
    if (std::abs(s.imag()) * f.spec.R * std::sqrt(static_cast<double>(f.spec.n)) > 700.0)
        throw std::domain_error("lowpass_energy_complex: |Im s| R beyond exponent range");
    if (s == cplx{0.0, 0.0}) return {0.0, 0.0};
    const Rule1D tr = gauss_legendre_on(0.0, 1.0, radial_count);
    const int n = f.spec.n;

    std::vector<cplx> sa(tr.nodes.size()), sb(tr.nodes.size());
    for (std::size_t t = 0; t < tr.nodes.size(); ++t) {
        sa[t] = s * tr.nodes[t];
        sb[t] = std::conj(s) * tr.nodes[t];
    }
    cplx spow{1.0, 0.0};
    for (int a = 0; a < n; ++a) spow *= s;

    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < dirs.count(); ++j) {
        const std::vector<cplx> A = detail::plane_wave_volume_batch(f, dirs.dir(j), sa);
        const std::vector<cplx> Bc = detail::plane_wave_volume_batch(f, dirs.dir(j), sb);
        cplx radial{0.0, 0.0};
        for (std::size_t t = 0; t < tr.nodes.size(); ++t) {
            const double tn = std::pow(tr.nodes[t], n - 1);
            radial += tr.weights[t] * tn * A[t] * std::conj(Bc[t]);
        }
        acc += dirs.weights[j] * radial;
    }
    return spow * acc;
}

/// Least-squares slope of log tail_energy(s) against log s over the given
/// radii; the tail-decay diagnostic. All radii must satisfy s h < 1 (safely
/// inside the resolvable band) and the list must hold at least four values.
inline double tail_decay_slope(const SourceField& f, const std::vector<double>& s_list,
                               int radial_count = 160, int dir_resolution = 64) {
    if (s_list.size() < 4)
        throw std::invalid_argument("tail_decay_slope: need at least four radii");
    std::vector<double> s_sorted = s_list;
    std::sort(s_sorted.begin(), s_sorted.end());
    if (s_sorted.front() <= 0.0)
        throw std::invalid_argument("tail_decay_slope: radii must be positive");
    const double h = f.spec.h();
    if (s_sorted.back() * h >= 1.0)
        throw std::invalid_argument(
            "tail_decay_slope: radius beyond the resolvable band (s h >= 1), the fit would "
            "alias");
    const double cutoff = std::min(2.0 * s_sorted.back(), nyquist_limit(f.spec));

    const DirectionSet dirs = make_direction_set(f.spec.n, dir_resolution);
    const FrequencyGrid band = FrequencyGrid::gauss(cutoff, radial_count);
    const SpectralSamples samples = assemble_spectra(f, dirs, band);

    std::vector<double> lx, ly;
    for (double s : s_sorted) {
        const double e = tail_energy(samples, s, cutoff);
        if (e <= 0.0) throw std::domain_error("tail_decay_slope: vanishing tail energy");
        lx.push_back(std::log(s));
        ly.push_back(std::log(e));
    }
    const std::size_t N = lx.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= N;
    my /= N;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    return sxy / sxx;
}

namespace detail {

/// out += coeff * prod_a table_a[digit_a] over the whole grid, parallel over
/// the leading axis, fixed accumulation order per node.
inline void accumulate_plane_wave(const GridSpec& g, cplx coeff,
                                  const std::vector<std::vector<cplx>>& tables,
                                  std::vector<cplx>& out) {
    const int n = g.n;
    const int m = g.m;
    std::size_t inner_stride = 1;
    for (int a = 1; a < n; ++a) inner_stride *= m;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t i0 = 0; i0 < m; ++i0) {
        const cplx p0 = coeff * tables[0][static_cast<std::size_t>(i0)];
        cplx* base = out.data() + static_cast<std::size_t>(i0) * inner_stride;
        if (n == 2) {
            const std::vector<cplx>& tl = tables[1];
            for (int i = 0; i < m; ++i) base[i] += p0 * tl[i];
            continue;
        }
        Odometer mid(n - 2, m);
        std::size_t off = 0;
        do {
            cplx p = p0;
            for (int a = 0; a < n - 2; ++a) p *= tables[a + 1][mid.digits[a]];
            const std::vector<cplx>& tl = tables[n - 1];
            cplx* row = base + off;
            for (int i = 0; i < m; ++i) row[i] += p * tl[i];
            off += m;
        } while (mid.advance());
    }
}

}  // namespace detail

/// Band-limited reconstruction: truncated polar inverse Fourier sum
/// f_rec(x) = (2 pi)^{-n} int_{|xi| <= s_cut} fhat(xi) e^{i xi.x} d xi
/// onto the output grid, support-clipped to the ball.
inline SourceField reconstruct(const SpectralSamples& samples, double s_cut,
                               const GridSpec& out_spec) {
    if (out_spec.n != samples.n) throw std::invalid_argument("reconstruct: dimension mismatch");
    if (s_cut <= 0.0) throw std::invalid_argument("reconstruct: s_cut must be positive");
    if (s_cut > samples.freqs.nodes.back() * (1.0 + 1e-12))
        throw std::invalid_argument("reconstruct: s_cut exceeds the sampled band");
    if (s_cut > nyquist_limit(out_spec) * (1.0 + 1e-12))
        throw std::invalid_argument("reconstruct: s_cut exceeds the output grid Nyquist limit");

    const detail::RadialInterpolant interp(samples);
    const Rule1D radial =
        gauss_legendre_on(0.0, s_cut, static_cast<int>(samples.freq_count()));
    const int n = out_spec.n;
    const int m = out_spec.m;
    const double norm = std::pow(2.0 * pi, -n);

    SourceField out(out_spec, 1, "reconstruction");
    std::vector<std::vector<cplx>> tables(n, std::vector<cplx>(m));
    for (std::size_t t = 0; t < radial.nodes.size(); ++t) {
        const double k = radial.nodes[t];
        const std::vector<cplx> row = interp.row(k);
        const double rw = norm * radial.weights[t] * std::pow(k, n - 1);
        for (std::size_t j = 0; j < samples.dir_count(); ++j) {
            const double* dir = samples.dirs.dir(j);
            for (int a = 0; a < n; ++a)
                for (int i = 0; i < m; ++i)
                    tables[a][i] = std::polar(1.0, k * dir[a] * out_spec.coord(i));
            const cplx coeff = rw * samples.dirs.weights[j] * row[j];
            detail::accumulate_plane_wave(out_spec, coeff, tables, out.values);
        }
    }
    detail::enforce_support(out);
    return out;
}

}  // namespace mfis
