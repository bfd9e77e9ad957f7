#include "icps/placement.hpp"

namespace icps {

namespace {

placement_decision no_feasible(bool allow_new_nodes) {
    placement_decision d;
    d.kind = allow_new_nodes ? placement_kind::new_node : placement_kind::defer;
    return d;
}

// a.used/a.capacity < b.used/b.capacity without floating point
bool lower_usage(const worker_node& a, const worker_node& b) {
    return a.used_mb * b.capacity_mb < b.used_mb * a.capacity_mb;
}

}  // namespace

placement_decision place_dlbds(mem_mb memory, const std::vector<worker_node>& nodes,
                               bool allow_new_nodes) {
    const worker_node* best = nullptr;
    for (const auto& node : nodes) {
        if (!can_host(node, memory)) continue;
        if (!best || lower_usage(node, *best)) best = &node;
    }
    if (!best) return no_feasible(allow_new_nodes);
    return {placement_kind::existing_node, best->id};
}

placement_decision place_ads(mem_mb memory, const std::vector<worker_node>& nodes,
                             const std::set<int>& predecessor_nodes,
                             bool has_predecessors, bool allow_new_nodes) {
    bool any_feasible = false;
    for (const auto& node : nodes)
        if (can_host(node, memory)) { any_feasible = true; break; }
    if (!any_feasible) return no_feasible(allow_new_nodes);

    if (!has_predecessors) return place_dlbds(memory, nodes, allow_new_nodes);

    for (const auto& node : nodes) {
        if (predecessor_nodes.count(node.id) && can_host(node, memory))
            return {placement_kind::existing_node, node.id};
    }
    for (const auto& node : nodes) {
        if (can_host(node, memory)) return {placement_kind::existing_node, node.id};
    }
    return no_feasible(allow_new_nodes);  // unreachable: any_feasible held
}

placement_decision place_fdds(mem_mb memory, const std::vector<worker_node>& nodes,
                              bool allow_new_nodes) {
    for (const auto& node : nodes) {
        if (can_host(node, memory)) return {placement_kind::existing_node, node.id};
    }
    return no_feasible(allow_new_nodes);
}

placement_decision place(placement_strategy strategy, mem_mb memory,
                         const std::vector<worker_node>& nodes,
                         const std::set<int>& predecessor_nodes,
                         bool has_predecessors, bool allow_new_nodes) {
    switch (strategy) {
        case placement_strategy::dlbds:
            return place_dlbds(memory, nodes, allow_new_nodes);
        case placement_strategy::ads:
            return place_ads(memory, nodes, predecessor_nodes, has_predecessors,
                             allow_new_nodes);
        case placement_strategy::fdds:
            return place_fdds(memory, nodes, allow_new_nodes);
    }
    return {};
}

}  // namespace icps
