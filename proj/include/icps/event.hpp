#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "icps/cluster.hpp"
#include "icps/workflow.hpp"

namespace icps {

// Queued simulation events. The enum value doubles as the tie-break priority
// for simultaneous events: pre-warm decisions run first within a tick,
// expiry precedes reuse, and arrivals are routed last.
enum class event_kind : int {
    interval_tick = 0,
    keep_alive_expire = 1,
    creation_complete = 2,
    function_complete = 3,
    data_arrival = 4,
    workflow_arrival = 5,
};

struct event {
    time_ms time = 0;
    std::uint64_t seq = 0;          // unique, monotone issue order
    event_kind kind = event_kind::interval_tick;
    int request = -1;
    int function = -1;
    int instance = -1;
    int interval = -1;
    int epoch = -1;                 // pause epoch guarding stale expiries
    time_ms latency_ms = 0;         // charged network latency (data_arrival)
};

// Strict total order (time, kind priority, seq); used as a min-queue.
struct event_after {
    bool operator()(const event& a, const event& b) const {
        if (a.time != b.time) return a.time > b.time;
        if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
        return a.seq > b.seq;
    }
};

class past_event : public std::runtime_error {
  public:
    past_event(time_ms event_time, time_ms clock)
        : std::runtime_error("event at " + std::to_string(event_time) +
                             " precedes clock " + std::to_string(clock)) {}
};

// Everything the simulator writes down: the applied queue events plus the
// bookkeeping records (deployments, starts, completions) that make the log
// replayable on its own. One record per NDJSON line.
enum class log_kind : int {
    interval_tick,
    keep_alive_expire,
    creation_complete,
    function_complete,
    data_arrival,
    workflow_arrival,
    instance_deployed,
    node_created,
    function_start,
    request_complete,
    routing_deferred,
    prewarm_failed,
    forced_expire,
    creation_cancelled,
};

const char* to_string(log_kind k);
log_kind log_kind_from_string(const std::string& s);

struct log_record {
    time_ms time = 0;
    std::uint64_t seq = 0;
    log_kind kind = log_kind::interval_tick;
    int request = -1;
    int function = -1;
    int instance = -1;
    int node = -1;
    int interval = -1;
    time_ms latency_ms = -1;
    mem_mb memory_mb = -1;
    int demand = -1;                // 1 demand creation, 0 pre-warm
};

struct request_outcome {
    int id = 0;
    int type_id = 0;
    time_ms arrival_ms = -1;
    time_ms end_ms = -1;

    bool completed() const { return end_ms >= 0; }
    time_ms response_ms() const { return end_ms - arrival_ms; }
};

// Authoritative run output: ordered records plus the per-request and
// per-instance summaries the metrics are computed from. Replaying the
// serialized records reconstructs the summaries exactly.
struct event_log {
    std::vector<log_record> records;
    std::vector<request_outcome> requests;
    std::vector<instance_record> instances;   // deployed instances only
    std::int64_t transfer_latency_ms = 0;
    int cold_start_count = 0;
    int prewarm_failures = 0;
    int node_count = 0;
    bool complete = true;                     // all requests finished

    void append(log_record rec) { records.push_back(rec); }
    void to_ndjson(std::ostream& out) const;
};

std::vector<log_record> parse_ndjson_log(std::istream& in);

}  // namespace icps
