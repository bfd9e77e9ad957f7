#include "icps/cluster.hpp"

namespace icps {

const char* to_string(instance_state s) {
    switch (s) {
        case instance_state::undeployed: return "undeployed";
        case instance_state::creating: return "creating";
        case instance_state::paused: return "paused";
        case instance_state::running: return "running";
        case instance_state::killed: return "killed";
    }
    return "?";
}

const char* to_string(lifecycle_trigger t) {
    switch (t) {
        case lifecycle_trigger::deploy: return "deploy";
        case lifecycle_trigger::creation_complete: return "creation_complete";
        case lifecycle_trigger::invoke: return "invoke";
        case lifecycle_trigger::complete: return "complete";
        case lifecycle_trigger::expire: return "expire";
    }
    return "?";
}

instance_record transition(instance_record inst, lifecycle_trigger trigger,
                           time_ms now) {
    switch (inst.state) {
        case instance_state::undeployed:
            if (trigger == lifecycle_trigger::deploy) {
                inst.state = instance_state::creating;
                inst.created_at = now;
                inst.last_state_change = now;
                return inst;
            }
            break;
        case instance_state::creating:
            if (trigger == lifecycle_trigger::creation_complete) {
                inst.state = instance_state::paused;
                inst.last_state_change = now;
                return inst;
            }
            break;
        case instance_state::paused:
            if (trigger == lifecycle_trigger::invoke) {
                inst.idle_accum_ms += now - inst.last_state_change;
                inst.state = instance_state::running;
                inst.last_state_change = now;
                return inst;
            }
            if (trigger == lifecycle_trigger::expire) {
                inst.idle_accum_ms += now - inst.last_state_change;
                inst.state = instance_state::killed;
                inst.killed_at = now;
                inst.last_state_change = now;
                return inst;
            }
            break;
        case instance_state::running:
            if (trigger == lifecycle_trigger::complete) {
                inst.state = instance_state::paused;
                inst.last_state_change = now;
                return inst;
            }
            break;
        case instance_state::killed:
            break;
    }
    throw illegal_transition(inst.state, trigger);
}

bool can_host(const worker_node& node, mem_mb memory) {
    return node.used_mb + memory <= node.capacity_mb;
}

time_ms transfer_latency(const network_model& net, int src_node, int dst_node) {
    return src_node == dst_node ? 0 : net.delay_ms;
}

instance_costs_result instance_costs(const instance_record& inst) {
    if (inst.state != instance_state::killed) throw not_terminated(inst.id);
    const std::int64_t lifetime = inst.killed_at - inst.created_at;
    instance_costs_result r;
    r.total_mb_ms = lifetime * inst.memory_mb;
    r.exec_mb_ms = (lifetime - inst.idle_accum_ms) * inst.memory_mb;
    return r;
}

}  // namespace icps
