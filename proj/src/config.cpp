#include "coolcav/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace coolcav {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' &&
            c != '.')
            return false;
    return true;
}

}  // namespace

KeyValueConfig KeyValueConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

KeyValueConfig KeyValueConfig::from_text(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        cfg.parse_line(line, line_no);
    }
    return cfg;
}

void KeyValueConfig::parse_line(const std::string& raw, int line_no) {
    std::string line = raw;
    if (const size_t hash = line.find('#'); hash != std::string::npos)
        line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) return;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
        throw ConfigError("expected 'key = value', got '" + trim(raw) + "'",
                          line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError("bad key '" + key + "'", line_no);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'",
                                         line_no);
    values_[key] = value;
    lines_[key] = line_no;
}

void KeyValueConfig::apply_override(const std::string& arg) {
    std::string s = arg;
    if (s.rfind("--", 0) == 0) s = s.substr(2);
    const size_t eq = s.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like --key=value: " + arg);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (!valid_key(key) || value.empty())
        throw ConfigError("bad override: " + arg);
    values_[key] = value;
    lines_[key] = 0;
}

bool KeyValueConfig::has(const std::string& key) const {
    return values_.count(key) != 0;
}

int KeyValueConfig::line_of(const std::string& key) const {
    const auto it = lines_.find(key);
    return it == lines_.end() ? 0 : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
    const std::string& v = it->second;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || !std::isfinite(x))
        throw ConfigError("'" + key + "' is not a finite number: " + v,
                          line_of(key));
    return x;
}

double KeyValueConfig::get_double_or(const std::string& key,
                                     double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int KeyValueConfig::get_int_or(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const double x = get_double(key);
    const int i = static_cast<int>(std::llround(x));
    if (x != static_cast<double>(i))
        throw ConfigError("'" + key + "' must be an integer", line_of(key));
    return i;
}

bool KeyValueConfig::get_bool_or(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("'" + key + "' is not a boolean: " + v, line_of(key));
}

std::string KeyValueConfig::get_string_or(const std::string& key,
                                          const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string KeyValueConfig::serialize() const {
    std::string out;
    for (const auto& [k, v] : values_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

namespace {

// Angle given either directly in radians (key) or in units of pi (key_pi).
double angle_from(const KeyValueConfig& kv, const std::string& key,
                  double fallback) {
    const std::string key_pi = key + "_pi";
    if (kv.has(key) && kv.has(key_pi))
        throw ConfigError("give either '" + key + "' or '" + key_pi +
                          "', not both");
    if (kv.has(key_pi)) return kv.get_double(key_pi) * std::numbers::pi;
    return kv.get_double_or(key, fallback);
}

double require(const KeyValueConfig& kv, const std::string& key) {
    if (!kv.has(key)) throw ConfigError("missing key '" + key + "'");
    return kv.get_double(key);
}

}  // namespace

SystemParams RunConfig::system_params() const {
    SystemParams p;
    p.gamma = require(kv, "params.gamma");
    p.kappa = require(kv, "params.kappa");
    p.omega_p = require(kv, "params.omega_p");
    p.eta = require(kv, "params.eta");
    if (!kv.has("params.varphi") && !kv.has("params.varphi_pi"))
        throw ConfigError("missing key 'params.varphi' (or params.varphi_pi)");
    p.varphi = angle_from(kv, "params.varphi", 0.0);
    p.phi = angle_from(kv, "params.phi", 0.0);
    p.d0 = kv.get_double_or("params.d0", 1.0);

    const bool has_g = kv.has("params.g");
    const bool has_coop = kv.has("params.cooperativity");
    if (has_g && has_coop)
        throw ConfigError("give either params.g or params.cooperativity");
    if (has_coop) {
        const double coop = kv.get_double("params.cooperativity");
        const double cv2 = p.cos2_varphi();
        if (coop < 0.0) throw ConfigError("params.cooperativity must be >= 0");
        if (coop > 0.0 && cv2 == 0.0)
            throw ConfigError(
                "params.cooperativity needs cos(varphi) != 0 to fix g");
        p.g = coop == 0.0 ? 0.0 : std::sqrt(coop * p.loss_product() / cv2);
    } else {
        p.g = kv.get_double_or("params.g", 0.0);
    }
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid params: ") + e.what());
    }
    return p;
}

DetuningPoint RunConfig::detuning_point() const {
    return {require(kv, "point.delta"), require(kv, "point.delta_cav")};
}

SweepGrid RunConfig::sweep_grid() const {
    SweepGrid grid;
    grid.params = system_params();
    grid.delta = {require(kv, "grid.delta.min"), require(kv, "grid.delta.max"),
                  kv.get_int_or("grid.delta.n", 200)};
    grid.delta_cav = {require(kv, "grid.delta_cav.min"),
                      require(kv, "grid.delta_cav.max"),
                      kv.get_int_or("grid.delta_cav.n", 200)};
    try {
        grid.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid grid: ") + e.what());
    }
    return grid;
}

OracleConfig RunConfig::oracle_config() const {
    OracleConfig c;
    c.n_cavity = kv.get_int_or("oracle.n_cavity", c.n_cavity);
    c.n_motion = kv.get_int_or("oracle.n_motion", c.n_motion);
    c.include_recoil = kv.get_bool_or("oracle.include_recoil", false);
    c.recoil_factor = kv.get_double_or("oracle.recoil_factor", 0.0);
    c.tol = kv.get_double_or("oracle.tol", c.tol);
    c.exact_cosine = kv.get_bool_or("oracle.exact_cosine", false);
    c.dim_guard = kv.get_int_or("oracle.dim_guard", c.dim_guard);
    return c;
}

EvolveOptions RunConfig::evolve_options() const {
    EvolveOptions e;
    if (kv.has("evolve.initial_level"))
        e.initial_level = kv.get_int_or("evolve.initial_level", 5);
    if (kv.has("evolve.initial_mean"))
        e.initial_mean = kv.get_double("evolve.initial_mean");
    if (e.initial_level && e.initial_mean)
        throw ConfigError(
            "give either evolve.initial_level or evolve.initial_mean");
    if (kv.has("evolve.truncation"))
        e.truncation = kv.get_int_or("evolve.truncation", 0);
    if (kv.has("evolve.duration"))
        e.duration = kv.get_double("evolve.duration");
    e.samples = kv.get_int_or("evolve.samples", e.samples);
    if (e.samples < 2) throw ConfigError("evolve.samples must be >= 2");
    return e;
}

OutputPaths RunConfig::output_paths() const {
    OutputPaths o;
    o.csv = kv.get_string_or("output.csv", o.csv);
    o.meta = kv.get_string_or("output.meta", o.csv + ".meta.json");
    o.trajectory = kv.get_string_or("output.trajectory", o.trajectory);
    o.profile = kv.get_string_or("output.profile", o.profile);
    o.report = kv.get_string_or("output.report", "");
    return o;
}

std::optional<CurveKind> RunConfig::sweep_curve() const {
    const std::string kind = kv.get_string_or("sweep.curve", "none");
    if (kind == "none") return std::nullopt;
    if (kind == "resonance") return CurveKind::resonance;
    if (kind == "interference") return CurveKind::interference;
    throw ConfigError("sweep.curve must be none|resonance|interference");
}

double RunConfig::limits_delta_cav() const {
    if (kv.has("limits.delta_cav")) return kv.get_double("limits.delta_cav");
    return kv.get_double_or("point.delta_cav", 0.0);
}

}  // namespace coolcav
