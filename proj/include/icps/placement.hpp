#pragma once

#include <set>
#include <vector>

#include "icps/cluster.hpp"

namespace icps {

enum class placement_strategy { dlbds, ads, fdds };

enum class placement_kind { existing_node, new_node, defer };

struct placement_decision {
    placement_kind kind = placement_kind::defer;
    int node_id = -1;  // valid for existing_node
};

// Feasible node with the lowest usage ratio (used/capacity, compared in
// integer cross products); ties to the lowest node id.
placement_decision place_dlbds(mem_mb memory, const std::vector<worker_node>& nodes,
                               bool allow_new_nodes);

// Affinity placement: with no real predecessors, behaves like the lowest
// memory usage rule; otherwise scans feasible nodes that already host a
// predecessor instance (ascending id), then the remaining feasible nodes.
// `predecessor_nodes` holds the nodes currently hosting live instances of
// any predecessor function.
placement_decision place_ads(mem_mb memory, const std::vector<worker_node>& nodes,
                             const std::set<int>& predecessor_nodes,
                             bool has_predecessors, bool allow_new_nodes);

// First feasible node in ascending id order, load ignored.
placement_decision place_fdds(mem_mb memory, const std::vector<worker_node>& nodes,
                              bool allow_new_nodes);

placement_decision place(placement_strategy strategy, mem_mb memory,
                         const std::vector<worker_node>& nodes,
                         const std::set<int>& predecessor_nodes,
                         bool has_predecessors, bool allow_new_nodes);

}  // namespace icps
