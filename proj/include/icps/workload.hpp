#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "icps/workflow.hpp"

namespace icps {

class trace_parse_error : public std::runtime_error {
  public:
    trace_parse_error(int line, const std::string& what)
        : std::runtime_error("trace line " + std::to_string(line) + ": " + what),
          line(line) {}
    int line;
};

class missing_field : public std::runtime_error {
  public:
    missing_field(int line, const std::string& field)
        : std::runtime_error("trace line " + std::to_string(line) +
                             ": missing field '" + field + "'"),
          field(field) {}
    std::string field;
};

class inconsistent_function : public std::runtime_error {
  public:
    explicit inconsistent_function(const std::string& name)
        : std::runtime_error("function '" + name +
                             "' recorded with conflicting exec/memory/cold-start") {}
};

class invalid_params : public std::runtime_error {
  public:
    explicit invalid_params(const std::string& what) : std::runtime_error(what) {}
};

// One recorded workflow: which functions ran, their specs, the dependency
// edges among them, and the arrival time.
struct trace_function {
    std::string name;
    time_ms exec_ms = 0;
    mem_mb memory_mb = 0;
    std::optional<time_ms> cold_start_ms;
};

struct trace_record {
    std::string workflow;
    time_ms arrival_ms = 0;
    std::vector<trace_function> functions;
    std::vector<std::pair<std::string, std::string>> edges;
};

struct workload {
    validated_application app;
    std::vector<workflow_type> types;     // ids 1..S
    std::vector<workflow_request> requests;
};

// Newline-delimited JSON, one trace_record per line. The application is the
// union of all recorded sub-graphs; each distinct function set becomes a
// workflow type; requests come out sorted by arrival.
workload load_trace(std::istream& in, time_ms default_cold_start_ms = 500);
workload load_trace_file(const std::string& path, time_ms default_cold_start_ms = 500);

// Inverse of load_trace on well-formed inputs.
void serialize_trace(const workload& wl, std::ostream& out);

struct synthetic_params {
    int concurrency = 100;        // total requests in the window
    int depth = 5;
    int branch_factor = 2;
    int type_count = 3;
    time_ms window_ms = 800000;
    std::uint64_t seed = 1;
    time_ms exec_min_ms = 10;
    time_ms exec_max_ms = 200;
    mem_mb memory_min_mb = 50;
    mem_mb memory_max_mb = 200;
    time_ms cold_start_ms = 500;
};

// Layered DAG of `depth` layers x `branch_factor` functions with virtual
// entry/exit, fully connected between adjacent layers. Types are distinct
// entry->exit paths; arrivals are uniform over the window with a seeded type
// mix. Deterministic for a fixed seed.
workload generate_synthetic(const synthetic_params& params);

}  // namespace icps
