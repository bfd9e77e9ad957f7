#include "icps/routing.hpp"

namespace icps {

routing_decision route_swpas(const std::vector<routing_candidate>& candidates,
                             time_ms now, time_ms cold_start_ms, time_ms exec_ms) {
    for (const auto& cand : candidates) {
        if (cand.state == instance_state::paused && cand.queue_length == 0)
            return {routing_action::assign, cand.instance_id};
    }

    const routing_candidate* best = nullptr;
    time_ms best_wait = 0;
    for (const auto& cand : candidates) {
        if (cand.state == instance_state::killed) continue;
        if (cand.state == instance_state::undeployed) continue;  // unknowable wait
        time_ms wait = static_cast<time_ms>(cand.queue_length) * exec_ms;
        if (cand.state != instance_state::paused)
            wait += std::max<time_ms>(0, cand.ready_at - now);
        if (!best || wait < best_wait) {
            best = &cand;
            best_wait = wait;
        }
    }
    if (!best) return {routing_action::create_and_assign, -1};
    if (best_wait > cold_start_ms) return {routing_action::create_and_assign, -1};
    return {routing_action::assign, best->instance_id};
}

routing_decision route_sfepas(const std::vector<routing_candidate>& candidates,
                              bool creation_outstanding) {
    const routing_candidate* best = nullptr;
    for (const auto& cand : candidates) {
        if (cand.state != instance_state::paused || cand.queue_length > 0) continue;
        if (!best || cand.node_free_mb > best->node_free_mb ||
            (cand.node_free_mb == best->node_free_mb &&
             (cand.node_id < best->node_id ||
              (cand.node_id == best->node_id && cand.instance_id < best->instance_id))))
            best = &cand;
    }
    if (best) return {routing_action::assign, best->instance_id};
    return {creation_outstanding ? routing_action::defer
                                 : routing_action::create_and_defer,
            -1};
}

int choose_mncpas_node(const std::vector<worker_node>& nodes,
                       std::optional<int> binding) {
    if (binding) return *binding;
    const worker_node* best = nullptr;
    for (const auto& node : nodes) {
        if (!best || node.free_mb() > best->free_mb()) best = &node;
    }
    return best ? best->id : -1;
}

}  // namespace icps
