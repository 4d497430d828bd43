#include "relfrac/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace relfrac::config {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "': not a number: '" + text + "'");
    return v;
}

} // namespace

std::string Config::get_string(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing config key '" + key + "'");
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
    return parse_double(key, get_string(key));
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
    double v = get_double(key);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError("config key '" + key + "': not an integer");
    return i;
}

int Config::get_int(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::vector<double> Config::get_double_list(const std::string& key) const {
    std::string text = get_string(key);
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        cfg.set(key, value);
    }
    return cfg;
}

void apply_overrides(Config& cfg, const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& flag = args[i];
        if (flag.rfind("--", 0) != 0)
            throw ConfigError("expected a --key flag, got '" + flag + "'");
        if (i + 1 >= args.size()) throw ConfigError("flag '" + flag + "' has no value");
        cfg.set(flag.substr(2), args[++i]);
    }
}

void validate_physics(const Config& cfg) {
    auto fail = [](const std::string& ineq) {
        throw ConfigError("config violates: " + ineq);
    };
    double m = cfg.get_double("m", 1.0);
    double s = cfg.get_double("s", 0.3);
    int N = cfg.get_int("N", 1);
    if (!(m > 0.0)) fail("m <= 0");
    if (!(s > 0.0 && s < 1.0)) fail("s outside (0, 1)");
    if (!(N >= 1 && N <= 3)) fail("N outside {1,2,3}");
    if (!(N >= 2.0 * s)) fail("N < 2s");
    double m2s = std::pow(m * m, s);
    if (cfg.has("p")) {
        double p = cfg.get_double("p");
        if (!(p > 1.0)) fail("p <= 1");
        // at the boundary N = 2s the critical exponent is unbounded
        if (N > 2.0 * s && !(p < 2.0 * N / (N - 2.0 * s) - 1.0)) fail("p >= 2*_s - 1");
    }
    if (cfg.has("V1")) {
        double V1 = cfg.get_double("V1");
        if (!(V1 > 0.0)) fail("V1 <= 0");
        if (!(V1 < m2s)) fail("V1 >= m^{2s}");
        if (cfg.has("V0")) {
            double V0 = cfg.get_double("V0");
            if (!(V0 > 0.0 && V0 <= V1)) fail("V0 outside (0, V1]");
        }
    }
    if (cfg.has("L") && !(cfg.get_double("L") > 0.0)) fail("L <= 0");
    if (cfg.has("n")) {
        int n = cfg.get_int("n");
        if (n < 16 || (n & (n - 1)) != 0) fail("n not a power of two >= 16");
    }
    if (cfg.has("eps") && !(cfg.get_double("eps") > 0.0)) fail("eps <= 0");
    if (cfg.has("eps_list"))
        for (double e : cfg.get_double_list("eps_list"))
            if (!(e > 0.0)) fail("eps <= 0");
    if (cfg.has("mu")) {
        double mu = cfg.get_double("mu");
        if (!(mu > -m2s)) fail("mu <= -m^{2s}");
    }
}

} // namespace relfrac::config
