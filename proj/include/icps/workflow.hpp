#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace icps {

using time_ms = std::int64_t;
using mem_mb = std::int64_t;

// A function of the application DAG. Entry/exit markers carry zero execution
// time and zero memory; such functions never instantiate a container and
// complete instantly when they become ready.
struct function_spec {
    std::string name;
    time_ms exec_time_ms = 0;
    mem_mb memory_mb = 0;
    time_ms cold_start_ms = 500;

    bool is_virtual() const { return exec_time_ms == 0 && memory_mb == 0; }
};

struct workflow_application {
    std::vector<function_spec> functions;
    std::vector<std::pair<int, int>> edges;  // indices into functions
};

enum class graph_error {
    cycle_detected,
    multiple_entries,
    multiple_exits,
    unreachable_function,
    disconnected_subgraph,
};

class validation_error : public std::runtime_error {
  public:
    validation_error(graph_error code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    graph_error code() const { return code_; }

  private:
    graph_error code_;
};

// An application whose DAG structure has been checked: acyclic, a unique
// entry (no predecessors) and exit (no successors), every function on some
// entry->exit path. Predecessor/successor lists and a topological order are
// cached. An application with zero functions is a legal degenerate case
// (empty workloads simulate to an empty log).
class validated_application {
  public:
    validated_application() = default;

    int size() const { return static_cast<int>(functions_.size()); }
    bool empty() const { return functions_.empty(); }
    int entry() const { return entry_; }
    int exit() const { return exit_; }
    const function_spec& function(int idx) const { return functions_.at(idx); }
    const std::vector<function_spec>& functions() const { return functions_; }
    const std::vector<int>& topo_order() const { return topo_; }
    const std::vector<int>& predecessors(int idx) const { return preds_.at(idx); }
    const std::vector<int>& successors(int idx) const { return succs_.at(idx); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    // Predecessors that are real functions (virtual markers filtered out).
    std::vector<int> real_predecessors(int idx) const;

    int index_of(const std::string& name) const;  // -1 when absent

  private:
    friend validated_application validate_application(const workflow_application&);

    std::vector<function_spec> functions_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> preds_;
    std::vector<std::vector<int>> succs_;
    std::vector<int> topo_;
    int entry_ = -1;
    int exit_ = -1;
};

validated_application validate_application(const workflow_application& app);

// The sub-graph of the application a given kind of request actually invokes.
// Members always include entry and exit; edges are the induced ones.
struct workflow_type {
    int id = 0;
    std::vector<int> members;                 // sorted function indices
    std::vector<std::pair<int, int>> edges;   // induced edge set

    bool contains(int fn) const;              // membership predicate
    std::vector<int> member_predecessors(int fn) const;
    std::vector<int> member_successors(int fn) const;
};

// Induced sub-graph over `invoked`; requires entry and exit to be invoked and
// every invoked function to lie on an entry->exit path within the sub-graph.
workflow_type derive_workflow_type(const validated_application& app,
                                   const std::set<int>& invoked, int type_id);

// Length of the longest entry->exit path of the type, weighted by exec time.
time_ms critical_path_exec_time(const validated_application& app,
                                const workflow_type& type);

struct workflow_request {
    int id = 0;        // 1-based, non-decreasing arrival order
    int type_id = 0;
    time_ms arrival_ms = 0;
};

// Members whose in-type predecessors are all completed and which are not
// themselves completed.
std::vector<int> ready_functions(const workflow_type& type,
                                 const std::set<int>& completed);

}  // namespace icps
