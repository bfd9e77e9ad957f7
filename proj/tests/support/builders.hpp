#pragma once

// shared construction helpers for tests

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "icps/workflow.hpp"
#include "icps/workload.hpp"

namespace icps::testing {

// deterministic bounded draw (modulo; bias irrelevant for tests)
inline std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

function_spec fn(const std::string& name, time_ms exec, mem_mb memory,
                 time_ms cold_start = 500);

// chain entry -> names[0] -> ... -> exit with virtual entry/exit
workflow_application chain_app(const std::vector<function_spec>& inner);

// diamond entry -> {b, c} -> exit
workflow_application diamond_app(time_ms exec_b, time_ms exec_c,
                                 mem_mb mem_b = 100, mem_mb mem_c = 100);

// random DAG on up to max_inner inner functions (plus virtual entry/exit),
// always valid; edges only forward in a random permutation
workflow_application random_dag(std::mt19937_64& rng, int max_inner,
                                time_ms exec_max = 100, mem_mb mem_max = 100);

// random edge soup which may be cyclic / multi-entry (for validator tests)
workflow_application random_graph_soup(std::mt19937_64& rng, int max_nodes);

// types as random distinct entry->exit paths of a validated app
std::vector<workflow_type> random_path_types(std::mt19937_64& rng,
                                             const validated_application& app,
                                             int want);

// evenly spaced arrivals: count requests per interval, for intervals
// intervals of length interval_ms, types round-robin
std::vector<workflow_request> constant_rate_requests(int per_interval, int intervals,
                                                     time_ms interval_ms,
                                                     int type_count);

workload single_type_workload(const workflow_application& app,
                              std::vector<time_ms> arrivals);

}  // namespace icps::testing
