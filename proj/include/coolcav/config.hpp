// Flat key = value run configuration with '#' comments, dotted sections,
// and --key=value command-line overrides (overrides win).

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coolcav/oracle.hpp"
#include "coolcav/sweep.hpp"
#include "coolcav/types.hpp"

namespace coolcav {

class KeyValueConfig {
  public:
    static KeyValueConfig from_file(const std::string& path);
    static KeyValueConfig from_text(const std::string& text);

    // "key=value" or "--key=value"; throws ConfigError on bad syntax.
    void apply_override(const std::string& arg);

    bool has(const std::string& key) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    int get_int_or(const std::string& key, int fallback) const;
    bool get_bool_or(const std::string& key, bool fallback) const;
    std::string get_string_or(const std::string& key,
                              const std::string& fallback) const;

    // Normalized "key = value" lines, sorted by key. parse(serialize())
    // yields the same map.
    std::string serialize() const;

    const std::map<std::string, std::string>& entries() const {
        return values_;
    }

  private:
    void parse_line(const std::string& line, int line_no);
    int line_of(const std::string& key) const;

    std::map<std::string, std::string> values_;
    std::map<std::string, int> lines_;
};

struct EvolveOptions {
    std::optional<int> initial_level;
    std::optional<double> initial_mean;
    std::optional<int> truncation;
    std::optional<double> duration;
    int samples = 200;
};

struct OutputPaths {
    std::string csv = "sweep.csv";
    std::string meta;  // default: csv + ".meta.json"
    std::string trajectory = "trajectory.csv";
    std::string profile = "profile.csv";
    std::string report;  // empty = stdout
};

// Typed view over a KeyValueConfig; all accessors throw ConfigError with the
// offending key (and line when known) on missing/invalid entries.
struct RunConfig {
    KeyValueConfig kv;

    SystemParams system_params() const;
    DetuningPoint detuning_point() const;
    SweepGrid sweep_grid() const;
    OracleConfig oracle_config() const;
    EvolveOptions evolve_options() const;
    OutputPaths output_paths() const;
    // Optional profile curve attached to a sweep run.
    std::optional<CurveKind> sweep_curve() const;
    double limits_delta_cav() const;
};

}  // namespace coolcav
