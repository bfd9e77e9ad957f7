#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "icps/config.hpp"
#include "icps/metrics.hpp"

namespace icps {

class schema_mismatch : public std::runtime_error {
  public:
    explicit schema_mismatch(const std::string& what) : std::runtime_error(what) {}
};

struct run_result {
    metrics_report report;
    std::string log_ndjson;  // kept for repetition 0 only
};

// Runs one repetition; seed feeds both the workload generator and the
// simulator. keep_log controls whether the serialized event log is returned.
run_result run_single(const experiment_config& cfg, std::uint64_t seed, bool keep_log);

// Writes report_rep<k>.json per repetition, results.csv, and the repetition-0
// event log under cfg.out_dir. Returns the per-repetition reports.
std::vector<metrics_report> run_experiment(const experiment_config& cfg);

struct sweep_result {
    std::vector<std::string> header;       // axis names + rep/seed + metrics
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
};

// Cartesian sweep: one CSV row per (combination, repetition). Combinations
// run in parallel across worker threads (capped by ICPS_SIM_THREADS); output
// order is independent of the interleaving.
sweep_result sweep(const sweep_grid& grid);

// Per grid point, the best objective is the minimum across the inputs;
// emits one RPD column per input CSV. Inputs must share the grid columns
// and cover the same grid points.
struct compare_result {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
};

compare_result compare_csvs(const std::vector<std::string>& paths, rpd_convention conv);

// plain CSV helpers (no quoting; values never contain commas)
std::vector<std::vector<std::string>> read_csv(std::istream& in);
std::vector<std::vector<std::string>> read_csv_file(const std::string& path);

}  // namespace icps
