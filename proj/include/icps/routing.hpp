#pragma once

#include <optional>
#include <vector>

#include "icps/cluster.hpp"

namespace icps {

enum class routing_strategy { swpas, sfepas, mncpas };

// A live instance of the invoked function, as the router sees it.
struct routing_candidate {
    int instance_id = 0;
    instance_state state = instance_state::paused;
    int node_id = -1;          // -1 while undeployed
    time_ms ready_at = 0;      // creation finish, or finish of current work
    int queue_length = 0;      // assigned invocations not yet started
    mem_mb node_free_mb = 0;
};

enum class routing_action {
    assign,              // bind the invocation to instance_id
    create_and_assign,   // create a new instance and bind the invocation to it
    create_and_defer,    // trigger a creation; park the invocation unbound
    defer,               // park the invocation, no creation
};

struct routing_decision {
    routing_action action = routing_action::defer;
    int instance_id = -1;
};

// Shortest waiting time first. Idle (paused) instances win outright; else the
// candidate with the smallest waiting time (remaining work or remaining
// creation, plus queued work) is chosen, unless that minimum strictly exceeds
// the cold start time, in which case a fresh instance is preferred.
routing_decision route_swpas(const std::vector<routing_candidate>& candidates,
                             time_ms now, time_ms cold_start_ms, time_ms exec_ms);

// Idle-only: assign to the idle instance whose node has the largest free
// memory (ties by node id, then instance id); with no idle instance, trigger
// a creation and defer. The deferred invocation is not bound to that
// creation. `creation_outstanding` suppresses duplicate creation triggers
// for invocations already covered by one in flight.
routing_decision route_sfepas(const std::vector<routing_candidate>& candidates,
                              bool creation_outstanding);

// Node choice for the single-node strategy: the bound node when a binding
// exists, else the node with the largest free memory (ties by id).
int choose_mncpas_node(const std::vector<worker_node>& nodes,
                       std::optional<int> binding);

}  // namespace icps
