#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tunnel/potential.hpp"

namespace tunnel {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat `key = value` configuration. Lists are comma separated, or `a:b:n` for n evenly
// spaced values from a to b inclusive.
class RunConfig {
public:
    static RunConfig parse(const std::string& text, const std::string& origin = "<string>");
    static RunConfig load(const std::string& path);

    // `key=value` override; the key must be known.
    void set(const std::string& assignment);
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    double get_positive(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<double> get_positive_list(const std::string& key, const std::vector<double>& fallback) const;

    const std::map<std::string, std::string>& values() const { return values_; }

    static const std::map<std::string, std::string>& known_keys();

private:
    std::map<std::string, std::string> values_;
};

std::vector<double> parse_number_list(const std::string& text);

// Potential description: one `segment = x_left, x_right, V` line per segment in order, an
// optional final `step = x_left, V` for a semi-infinite last segment, `#` comments.
PiecewisePotential parse_potential(const std::string& text);
PiecewisePotential load_potential(const std::string& path);

}  // namespace tunnel
