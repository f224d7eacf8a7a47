// File formats and serialization.
//
// Binary containers (little-endian, 64-bit IEEE doubles):
//
//   Source field (.mfsf):
//     magic "MFSF" | u32 version=1 | u32 n | u32 m | u32 d | f64 R
//     | m^n complex values, row-major, interleaved re/im
//
//   Boundary dataset (.mfbd):
//     magic "MFBD" | u32 version=1 | u32 n | u64 node_count | u64 freq_count
//     | f64 R | f64 K
//     | nodes (node_count * n f64) | node weights (node_count f64)
//     | freqs (freq_count f64) | freq weights (freq_count f64)
//     | u (freq_count * node_count re/im pairs) | du (same shape)
//
//   Spectral samples (.mfss):
//     magic "MFSS" | u32 version=1 | u32 n | u64 dir_count | u64 freq_count
//     | f64 K
//     | directions (dir_count * n f64) | direction weights (dir_count f64)
//     | freqs (freq_count f64) | freq weights (freq_count f64)
//     | vals (freq_count * dir_count re/im pairs)
//
// Each writer also emits a JSON sidecar "<path>.json" with metadata and
// provenance. All writes are atomic (temp file + rename).
#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "json.hpp"

#include "mfis/field.hpp"
#include "mfis/forward.hpp"
#include "mfis/spectral.hpp"
#include "mfis/stability.hpp"

namespace mfis::io {

using ordered_json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

inline std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Fixed shortest-roundtrip formatting used by every text emitter, so that
/// identical runs produce identical bytes.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Writes `content` to `path` atomically (temp file in the same directory,
/// then rename).
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path dir = path.parent_path();
    if (dir.empty()) dir = ".";
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const std::filesystem::path tmp =
        dir / (path.filename().string() + ".tmp-" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open temp file " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string());
    }
}

namespace detail {

struct Writer {
    std::string bytes;

    void raw(const void* p, std::size_t size) {
        bytes.append(static_cast<const char*>(p), size);
    }
    void u32(std::uint32_t v) { raw(&v, 4); }
    void u64(std::uint64_t v) { raw(&v, 8); }
    void f64(double v) { raw(&v, 8); }
    void f64s(const std::vector<double>& v) { raw(v.data(), v.size() * 8); }
    void cplxs(const std::vector<cplx>& v) { raw(v.data(), v.size() * 16); }
};

struct Reader {
    std::string bytes;
    std::size_t at = 0;

    explicit Reader(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        bytes = ss.str();
    }

    void raw(void* p, std::size_t size) {
        if (at + size > bytes.size()) throw IoError("truncated file");
        std::memcpy(p, bytes.data() + at, size);
        at += size;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, 4);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        raw(&v, 8);
        return v;
    }
    double f64() {
        double v;
        raw(&v, 8);
        return v;
    }
    std::vector<double> f64s(std::size_t count) {
        std::vector<double> v(count);
        raw(v.data(), count * 8);
        return v;
    }
    std::vector<cplx> cplxs(std::size_t count) {
        std::vector<cplx> v(count);
        raw(v.data(), count * 16);
        return v;
    }
    void expect_magic(const char* magic) {
        char m[4];
        raw(m, 4);
        if (std::string(m, 4) != magic) throw IoError(std::string("bad magic, expected ") + magic);
    }
};

inline void write_sidecar(const std::filesystem::path& path, ordered_json meta) {
    atomic_write(path.string() + ".json", meta.dump(2) + "\n");
}

}  // namespace detail

inline void write_field(const std::filesystem::path& path, const SourceField& f) {
    detail::Writer w;
    w.raw("MFSF", 4);
    w.u32(1);
    w.u32(static_cast<std::uint32_t>(f.spec.n));
    w.u32(static_cast<std::uint32_t>(f.spec.m));
    w.u32(static_cast<std::uint32_t>(f.d));
    w.f64(f.spec.R);
    w.cplxs(f.values);
    atomic_write(path, w.bytes);
    detail::write_sidecar(path, ordered_json{{"format", "mfsf"},
                                             {"version", 1},
                                             {"n", f.spec.n},
                                             {"m", f.spec.m},
                                             {"d", f.d},
                                             {"R", f.spec.R},
                                             {"meta", f.meta},
                                             {"payload_fnv1a64", hex64(fnv1a64(
                                                 w.bytes.data(), w.bytes.size()))}});
}

inline SourceField read_field(const std::filesystem::path& path) {
    detail::Reader r(path);
    r.expect_magic("MFSF");
    if (r.u32() != 1) throw IoError("unsupported field version");
    const int n = static_cast<int>(r.u32());
    const int m = static_cast<int>(r.u32());
    const int d = static_cast<int>(r.u32());
    const double R = r.f64();
    SourceField f(GridSpec(n, R, m), d, "file:" + path.filename().string());
    f.values = r.cplxs(f.spec.count());
    return f;
}

inline void write_dataset(const std::filesystem::path& path, const BoundaryDataset& data,
                          const std::string& provenance = "") {
    detail::Writer w;
    w.raw("MFBD", 4);
    w.u32(1);
    w.u32(static_cast<std::uint32_t>(data.n()));
    w.u64(data.node_count());
    w.u64(data.freq_count());
    w.f64(data.R());
    w.f64(data.K);
    w.f64s(data.rule.nodes);
    w.f64s(data.rule.weights);
    w.f64s(data.freqs.nodes);
    w.f64s(data.freqs.weights);
    w.cplxs(data.u);
    w.cplxs(data.du);
    atomic_write(path, w.bytes);
    detail::write_sidecar(path, ordered_json{{"format", "mfbd"},
                                             {"version", 1},
                                             {"n", data.n()},
                                             {"R", data.R()},
                                             {"K", data.K},
                                             {"nodes", data.node_count()},
                                             {"freqs", data.freq_count()},
                                             {"noise_meta", data.noise_meta},
                                             {"provenance", provenance},
                                             {"payload_fnv1a64", hex64(fnv1a64(
                                                 w.bytes.data(), w.bytes.size()))}});
}

inline BoundaryDataset read_dataset(const std::filesystem::path& path) {
    detail::Reader r(path);
    r.expect_magic("MFBD");
    if (r.u32() != 1) throw IoError("unsupported dataset version");
    BoundaryDataset d;
    d.rule.n = static_cast<int>(r.u32());
    const std::size_t nodes = r.u64();
    const std::size_t freqs = r.u64();
    d.rule.R = r.f64();
    d.K = r.f64();
    d.rule.nodes = r.f64s(nodes * d.rule.n);
    d.rule.weights = r.f64s(nodes);
    d.freqs.nodes = r.f64s(freqs);
    d.freqs.weights = r.f64s(freqs);
    d.freqs.K = d.K;
    d.u = r.cplxs(freqs * nodes);
    d.du = r.cplxs(freqs * nodes);
    // noise_meta travels in the sidecar; recover it when present.
    const std::filesystem::path side = path.string() + ".json";
    if (std::filesystem::exists(side)) {
        std::ifstream in(side);
        try {
            ordered_json j;
            in >> j;
            if (j.contains("noise_meta")) d.noise_meta = j["noise_meta"].get<std::string>();
        } catch (...) {
            // sidecar is advisory
        }
    }
    return d;
}

inline void write_spectra(const std::filesystem::path& path, const SpectralSamples& s) {
    detail::Writer w;
    w.raw("MFSS", 4);
    w.u32(1);
    w.u32(static_cast<std::uint32_t>(s.n));
    w.u64(s.dir_count());
    w.u64(s.freq_count());
    w.f64(s.freqs.K);
    w.f64s(s.dirs.nodes);
    w.f64s(s.dirs.weights);
    w.f64s(s.freqs.nodes);
    w.f64s(s.freqs.weights);
    w.cplxs(s.vals);
    atomic_write(path, w.bytes);
    detail::write_sidecar(path, ordered_json{{"format", "mfss"},
                                             {"version", 1},
                                             {"n", s.n},
                                             {"dirs", s.dir_count()},
                                             {"freqs", s.freq_count()},
                                             {"source", s.source_meta}});
}

inline SpectralSamples read_spectra(const std::filesystem::path& path) {
    detail::Reader r(path);
    r.expect_magic("MFSS");
    if (r.u32() != 1) throw IoError("unsupported spectra version");
    SpectralSamples s;
    s.n = static_cast<int>(r.u32());
    const std::size_t dirs = r.u64();
    const std::size_t freqs = r.u64();
    s.freqs.K = r.f64();
    s.dirs.n = s.n;
    s.dirs.nodes = r.f64s(dirs * s.n);
    s.dirs.weights = r.f64s(dirs);
    s.freqs.nodes = r.f64s(freqs);
    s.freqs.weights = r.f64s(freqs);
    s.vals = r.cplxs(freqs * dirs);
    s.source_meta = "file";
    return s;
}

/// CSV export: one row per (radial node, direction), schema fixed by the
/// header comment line.
inline std::string spectra_csv(const SpectralSamples& s) {
    std::string out = "# mfis-spectra-csv v1\n";
    out += "k,dir";
    for (int a = 1; a <= s.n; ++a) out += ",xi" + std::to_string(a);
    out += ",re_fhat,im_fhat\n";
    for (std::size_t i = 0; i < s.freq_count(); ++i) {
        for (std::size_t j = 0; j < s.dir_count(); ++j) {
            out += format_double(s.freqs.nodes[i]);
            out += "," + std::to_string(j);
            for (int a = 0; a < s.n; ++a) out += "," + format_double(s.dirs.dir(j)[a]);
            const cplx v = s.vals[i * s.dir_count() + j];
            out += "," + format_double(v.real());
            out += "," + format_double(v.imag());
            out += "\n";
        }
    }
    return out;
}

inline ordered_json report_json(const StabilityReport& rep) {
    return ordered_json{{"eps", rep.eps},
                        {"case", to_string(rep.tag)},
                        {"noiseless", rep.noiseless},
                        {"s0", std::isfinite(rep.s0) ? ordered_json(rep.s0) : ordered_json("inf")},
                        {"s_cut", rep.s_cut},
                        {"mu_s0", rep.mu_at_cutoff},
                        {"bound", rep.bound},
                        {"measured_error", rep.measured_error},
                        {"meta", rep.meta}};
}

}  // namespace mfis::io
