#include "tunnel/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace tunnel {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw, const std::string& key) {
    const std::string s = trim(raw);
    if (s.empty()) throw ConfigError("empty value for '" + key + "'");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end == s.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw ConfigError("'" + key + "' expects a finite number, got '" + s + "'");
    }
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

const std::map<std::string, std::string>& RunConfig::known_keys() {
    static const std::map<std::string, std::string> keys{
        {"V0", "barrier height, eV"},
        {"d", "barrier width(s), A"},
        {"gap", "double-barrier gap(s), A"},
        {"E", "kinetic energy(ies), eV"},
        {"k", "wavenumber(s), 1/A"},
        {"k_over_eps", "wavenumber(s) in units of eps"},
        {"E_mean", "packet mean energy(ies), eV"},
        {"k0", "packet central wavenumber(s), 1/A"},
        {"dk", "packet spectral width(s), 1/A"},
        {"omega", "barrier modulation frequency, rad/s"},
        {"deltaV", "barrier modulation amplitude, eV"},
        {"nodes", "Gauss-Legendre nodes per packet"},
        {"x_points", "probe points across the barrier"},
        {"t_min", "time window start, s"},
        {"t_max", "time window end, s"},
        {"coarse_dt", "support-scan time step, s"},
        {"fine_dt", "integration time step, s"},
        {"flux_floor", "relative floor for sign-split flux integrals"},
        {"svg", "write SVG plots"},
        {"flux", "include wavepacket flux times"},
        {"k0_over_eps", "packet centres in units of eps"},
        {"d_eps", "barrier widths in units of 1/eps"},
        {"dk_over_k0", "spectral width relative to k0"},
        {"grid_points", "k grid size for the reshaping scan"},
        {"table_points", "k samples written per reshaping case"},
        {"b", "undersized waveguide width, A"},
        {"omega_ratio", "omega / omega_c sweep for the dispersion table"},
        {"barrier_omega_ratio", "omega / omega_c of the undersized section"},
        {"outer_ratio", "outer guide width / undersized width"},
        {"kappa_L", "undersized section lengths in units of 1/|kappa|"},
        {"kappa_d", "opaque-barrier widths in units of 1/kappa"},
        {"margin", "off-resonance margin on |sin(k gap + arg r)|"},
        {"seeds", "number of Bohm trajectories"},
        {"seed_mode", "transmitted | full"},
        {"combine", "product | zip pairing of the d, E_mean/k0 and dk lists"},
        {"potential_file", "segment list for a general potential"},
        {"mapping_tolerance", "relative tolerance for mapped vs direct optical times"},
        {"gap_tolerance", "relative tolerance for double-barrier gap independence"},
    };
    return keys;
}

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        if (cfg.values_.count(key)) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
        try {
            cfg.set(key, trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) { return parse(read_file(path), path); }

void RunConfig::set(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!known_keys().count(key)) throw ConfigError("unknown key '" + key + "'");
    if (value.empty()) throw ConfigError("empty value for '" + key + "'");
    values_[key] = value;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_number(it->second, key);
}

double RunConfig::get_positive(const std::string& key, double fallback) const {
    const double v = get_double(key, fallback);
    if (!(v > 0.0)) throw ConfigError("'" + key + "' must be positive");
    return v;
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    const double v = get_double(key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("'" + key + "' must be an integer");
    return static_cast<int>(v);
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw ConfigError("'" + key + "' expects true or false");
}

std::vector<double> parse_number_list(const std::string& text) {
    const std::string s = trim(text);
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() != 3) throw ConfigError("range '" + s + "' must be a:b:n");
        const double a = parse_number(parts[0], "range start"), b = parse_number(parts[1], "range end");
        const double nd = parse_number(parts[2], "range count");
        if (nd < 1 || nd != std::floor(nd)) throw ConfigError("range count must be a positive integer");
        const int n = static_cast<int>(nd);
        for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
        return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item, "list item"));
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

std::vector<double> RunConfig::get_list(const std::string& key, const std::vector<double>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        return parse_number_list(it->second);
    } catch (const ConfigError& e) {
        throw ConfigError("'" + key + "': " + e.what());
    }
}

std::vector<double> RunConfig::get_positive_list(const std::string& key, const std::vector<double>& fallback) const {
    std::vector<double> v = get_list(key, fallback);
    if (v.empty()) throw ConfigError("'" + key + "' must not be empty");
    for (double x : v) {
        if (!(x > 0.0)) throw ConfigError("'" + key + "' values must be positive");
    }
    return v;
}

PiecewisePotential parse_potential(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<Segment> segs;
    bool step = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "potential line " + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (step) throw ConfigError(where + ": nothing may follow the step segment");
        std::vector<double> v;
        try {
            v = parse_number_list(line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": " + e.what());
        }
        if (key == "segment") {
            if (v.size() != 3) throw ConfigError(where + ": segment needs x_left, x_right, V");
            segs.push_back({v[0], v[1], v[2]});
        } else if (key == "step") {
            if (v.size() != 2) throw ConfigError(where + ": step needs x_left, V");
            segs.push_back({v[0], v[0], v[1]});
            step = true;
        } else {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
    try {
        return PiecewisePotential(std::move(segs), step);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid potential: ") + e.what());
    }
}

PiecewisePotential load_potential(const std::string& path) { return parse_potential(read_file(path)); }

}  // namespace tunnel
