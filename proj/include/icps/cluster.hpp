#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "icps/workflow.hpp"

namespace icps {

// The five lifecycle states of a function instance and the triggers that
// move between them. Exactly five edges are legal:
//   undeployed --deploy--> creating --creation_complete--> paused
//   paused --invoke--> running --complete--> paused --expire--> killed
enum class instance_state { undeployed, creating, paused, running, killed };
enum class lifecycle_trigger { deploy, creation_complete, invoke, complete, expire };

const char* to_string(instance_state s);
const char* to_string(lifecycle_trigger t);

class illegal_transition : public std::runtime_error {
  public:
    illegal_transition(instance_state s, lifecycle_trigger t)
        : std::runtime_error(std::string("illegal transition: ") + to_string(s) +
                             " + " + to_string(t)),
          state(s), trigger(t) {}
    instance_state state;
    lifecycle_trigger trigger;
};

struct instance_record {
    int id = 0;                    // 1-based creation order
    int function = -1;
    std::optional<int> node;       // absent while undeployed
    instance_state state = instance_state::undeployed;
    mem_mb memory_mb = 0;
    time_ms created_at = -1;       // set on deploy
    time_ms killed_at = -1;        // set on expire
    time_ms idle_accum_ms = 0;     // paused time accrued so far
    time_ms last_state_change = 0;
};

// Applies one lifecycle trigger. Idle time accrues while paused, so leaving
// the paused state (invoke or expire) adds now - last_state_change.
instance_record transition(instance_record inst, lifecycle_trigger trigger,
                           time_ms now);

struct worker_node {
    int id = 0;                    // 1-based
    mem_mb capacity_mb = 0;
    mem_mb used_mb = 0;
    std::set<int> resident;        // instance ids currently reserving memory

    mem_mb free_mb() const { return capacity_mb - used_mb; }
};

bool can_host(const worker_node& node, mem_mb memory);

struct network_model {
    time_ms delay_ms = 0;          // constant between distinct nodes
};

time_ms transfer_latency(const network_model& net, int src_node, int dst_node);

class not_terminated : public std::runtime_error {
  public:
    explicit not_terminated(int instance_id)
        : std::runtime_error("instance " + std::to_string(instance_id) +
                             " not killed; costs undefined") {}
};

struct instance_costs_result {
    std::int64_t total_mb_ms = 0;  // lifetime x memory
    std::int64_t exec_mb_ms = 0;   // (lifetime - idle) x memory
};

instance_costs_result instance_costs(const instance_record& inst);

}  // namespace icps
