#pragma once

// Independent replay of a serialized event log. Rebuilds request and
// instance timelines from the raw NDJSON records alone and recomputes the
// evaluation quantities, without touching the engine's bookkeeping.

#include <cstdint>
#include <map>
#include <string>

#include "icps/workload.hpp"

namespace icps::testing {

struct replay_metrics {
    double phi_resp = 1.0;
    double phi_resource = 1.0;
    double eta = 1.0;
    std::int64_t transfer_latency_ms = 0;
    int cold_starts = 0;
    int completed_requests = 0;
    int instances = 0;
    // per-instance recomputed idle time, keyed by instance id
    std::map<int, time_ms> idle_by_instance;
    // per-request charged transfer latency
    std::map<int, time_ms> transfer_by_request;
};

replay_metrics replay_log(const std::string& ndjson, const workload& wl);

}  // namespace icps::testing
