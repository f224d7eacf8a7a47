// Experiment configuration: a single human-readable key = value document per
// experiment, with typed accessors and the builders the CLI drives.
#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mfis/field.hpp"
#include "mfis/quadrature.hpp"

namespace mfis {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Flat key = value document; '#' starts a comment, blank lines ignored.
class KeyValueDoc {
  public:
    static KeyValueDoc parse(std::istream& in) {
        KeyValueDoc doc;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = detail::trim(line.substr(0, eq));
            const std::string val = detail::trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
            doc.entries_[key] = val;
        }
        return doc;
    }

    static KeyValueDoc parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file " + path);
        return parse(in);
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        try {
            std::size_t used = 0;
            const double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument("trailing junk");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': not a number: " + it->second);
        }
    }

    int get_int(const std::string& key, int fallback) const {
        const double v = get_double(key, fallback);
        const int i = static_cast<int>(v);
        if (static_cast<double>(i) != v)
            throw ConfigError("config key '" + key + "': not an integer");
        return i;
    }

    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& fallback) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        std::vector<double> out;
        std::stringstream ss(it->second);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = detail::trim(tok);
            if (tok.empty()) continue;
            try {
                out.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigError("config key '" + key + "': bad list entry: " + tok);
            }
        }
        if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
        return out;
    }

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

/// Everything one experiment needs; defaults give the standard n=2 setup.
struct ExperimentConfig {
    int n = 2;
    double R = 1.0;
    int m = 257;
    int d = 1;

    std::string source = "bump";  // bump | spline | file
    std::vector<double> bump_center;
    double bump_width = 0.2;
    cplx bump_amplitude{1.0, 0.0};
    double spline_radius = 0.8;
    std::string source_file;

    double K = 8.0;
    int radial_count = 64;
    int sphere_resolution = 256;
    int direction_resolution = 64;

    std::vector<double> noise_levels{0.0};
    std::vector<std::uint64_t> seeds{42};
    std::vector<double> K_sweep;
    double s_cut = 0.0;  // 0 = automatic: min(K, grid Nyquist)

    std::string out_dir = "out";

    static ExperimentConfig from_doc(const KeyValueDoc& doc) {
        ExperimentConfig c;
        c.n = doc.get_int("n", c.n);
        c.R = doc.get_double("R", c.R);
        c.m = doc.get_int("m", c.m);
        c.d = doc.get_int("d", c.d);
        c.source = doc.get_string("source", c.source);
        c.bump_center = doc.get_list("bump_center", std::vector<double>(c.n, 0.0));
        c.bump_width = doc.get_double("bump_width", c.bump_width);
        c.bump_amplitude = cplx{doc.get_double("bump_amplitude_re", 1.0),
                                doc.get_double("bump_amplitude_im", 0.0)};
        c.spline_radius = doc.get_double("spline_radius", c.spline_radius);
        c.source_file = doc.get_string("source_file", "");
        c.K = doc.get_double("K", c.K);
        c.radial_count = doc.get_int("radial_count", c.radial_count);
        c.sphere_resolution = doc.get_int("sphere_resolution", c.sphere_resolution);
        c.direction_resolution = doc.get_int("direction_resolution", c.direction_resolution);
        c.noise_levels = doc.get_list("noise_levels", c.noise_levels);
        std::vector<double> seeds = doc.get_list("seeds", {42.0});
        c.seeds.clear();
        for (double s : seeds) c.seeds.push_back(static_cast<std::uint64_t>(s));
        c.K_sweep = doc.get_list("K_sweep", {});
        c.s_cut = doc.get_double("s_cut", 0.0);
        c.out_dir = doc.get_string("out_dir", c.out_dir);
        c.validate();
        return c;
    }

    static ExperimentConfig from_file(const std::string& path) {
        return from_doc(KeyValueDoc::parse_file(path));
    }

    void validate() const {
        if (n < 2) throw ConfigError("config: n must be >= 2");
        if (R <= 0.0) throw ConfigError("config: R must be positive");
        if (m < 3 || m % 2 == 0) throw ConfigError("config: m must be odd and >= 3");
        if (d < 1) throw ConfigError("config: d must be >= 1");
        if (4 * d <= n) throw ConfigError("config: the stability theory requires 4d > n");
        if (source != "bump" && source != "spline" && source != "file")
            throw ConfigError("config: source must be bump, spline or file");
        if (source == "file" && source_file.empty())
            throw ConfigError("config: source = file needs source_file");
        if (K <= 0.0) throw ConfigError("config: K must be positive");
        if (radial_count < 2) throw ConfigError("config: radial_count must be >= 2");
        if (sphere_resolution < 8) throw ConfigError("config: sphere_resolution must be >= 8");
        if (direction_resolution < 8)
            throw ConfigError("config: direction_resolution must be >= 8");
        for (double lv : noise_levels)
            if (lv < 0.0) throw ConfigError("config: noise levels must be nonnegative");
        for (std::size_t i = 1; i < K_sweep.size(); ++i)
            if (K_sweep[i] <= K_sweep[i - 1])
                throw ConfigError("config: K_sweep must be strictly ascending");
        if (static_cast<int>(bump_center.size()) != n)
            throw ConfigError("config: bump_center must have n entries");
    }

    GridSpec grid() const { return GridSpec(n, R, m); }
};

}  // namespace mfis
