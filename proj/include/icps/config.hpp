#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "icps/engine.hpp"
#include "icps/metrics.hpp"
#include "icps/scheduler.hpp"
#include "icps/workload.hpp"

namespace icps {

class config_error : public std::runtime_error {
  public:
    config_error(const std::string& key, const std::string& what)
        : std::runtime_error("config key '" + key + "': " + what), key(key) {}
    std::string key;
};

// Minimal INI reader: [section] headers, key = value lines, '#' or ';'
// comments. Values keep internal whitespace; surrounding whitespace trimmed.
struct ini_file {
    std::map<std::string, std::map<std::string, std::string>> sections;

    static ini_file parse(std::istream& in);
    static ini_file parse_file(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
};

struct trace_source {
    std::string path;
};

struct experiment_config {
    sim_config sim;
    policy_bundle policy;
    std::variant<synthetic_params, trace_source> workload_source;
    std::string out_dir = "out";
    int repetitions = 1;
    rpd_convention rpd = rpd_convention::literal;
};

// Sections: [sim], [policy], [workload], [output]. Unknown keys and unknown
// enum values raise config_error naming the key. Comma-separated values are
// only legal through parse_sweep_grid.
experiment_config parse_experiment_config(const ini_file& ini);

struct sweep_axis {
    std::string section;
    std::string key;
    std::vector<std::string> values;
};

struct sweep_grid {
    std::vector<experiment_config> combos;
    std::vector<sweep_axis> axes;                    // the varied keys
    std::vector<std::vector<std::string>> combo_values;  // per combo, per axis
};

// Expands every comma-separated value on a sweepable key into the Cartesian
// product of single-valued configs.
sweep_grid parse_sweep_grid(const ini_file& ini);

workload build_workload(const experiment_config& cfg, std::uint64_t seed);

}  // namespace icps
