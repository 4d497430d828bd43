#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Flat key = value run configuration: '#' comments, later assignments win,
// command-line overrides win over the file. Every physical constraint is
// re-validated at parse time with a named inequality in the error message.

namespace relfrac::config {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Config {
  public:
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    /// Throws ConfigError naming the key when absent.
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    /// Comma-separated list of reals.
    std::vector<double> get_double_list(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

Config parse_config_file(const std::string& path);

/// Applies "--key value" pairs on top of a parsed config. Throws
/// ConfigError on a dangling flag or a token that is not a flag.
void apply_overrides(Config& cfg, const std::vector<std::string>& args);

/// Named-inequality validation of the physical keys present in cfg
/// (m > 0, 0 < s < 1, V1 < m^{2s}, 1 < p < 2*_s - 1, ...). Throws
/// ConfigError quoting the violated inequality, e.g. "V1 >= m^{2s}".
void validate_physics(const Config& cfg);

} // namespace relfrac::config
