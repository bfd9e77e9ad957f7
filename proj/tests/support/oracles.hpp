#pragma once

// brute-force oracles, deliberately independent of the library's algorithms

#include <set>
#include <vector>

#include "icps/workflow.hpp"

namespace icps::testing {

// cycle check by exhaustive DFS over every start node
bool has_cycle_bruteforce(int node_count,
                          const std::vector<std::pair<int, int>>& edges);

// longest entry->exit path weight by full path enumeration
time_ms longest_path_bruteforce(const validated_application& app,
                                const workflow_type& type);

// every entry->exit path of the type (function index sequences)
std::vector<std::vector<int>> enumerate_paths(const validated_application& app,
                                              const workflow_type& type);

}  // namespace icps::testing
