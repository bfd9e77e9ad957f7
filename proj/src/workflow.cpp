#include "icps/workflow.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace icps {

std::vector<int> validated_application::real_predecessors(int idx) const {
    std::vector<int> out;
    for (int p : preds_.at(idx)) {
        if (!functions_[p].is_virtual()) out.push_back(p);
    }
    return out;
}

int validated_application::index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i) {
        if (functions_[i].name == name) return i;
    }
    return -1;
}

validated_application validate_application(const workflow_application& app) {
    validated_application out;
    out.functions_ = app.functions;
    out.edges_ = app.edges;

    const int n = static_cast<int>(app.functions.size());
    if (n == 0) return out;  // degenerate empty application

    out.preds_.assign(n, {});
    out.succs_.assign(n, {});
    for (auto [from, to] : app.edges) {
        if (from < 0 || from >= n || to < 0 || to >= n)
            throw std::out_of_range("edge references unknown function");
        out.succs_[from].push_back(to);
        out.preds_[to].push_back(from);
    }
    for (int i = 0; i < n; ++i) {
        std::sort(out.preds_[i].begin(), out.preds_[i].end());
        std::sort(out.succs_[i].begin(), out.succs_[i].end());
    }

    std::vector<int> sources, sinks;
    for (int i = 0; i < n; ++i) {
        if (out.preds_[i].empty()) sources.push_back(i);
        if (out.succs_[i].empty()) sinks.push_back(i);
    }
    // a nonempty acyclic graph always has a source and a sink
    if (sources.empty() || sinks.empty())
        throw validation_error(graph_error::cycle_detected, "dependency cycle");
    if (sources.size() != 1)
        throw validation_error(graph_error::multiple_entries,
                               "more than one entry function");
    if (sinks.size() != 1)
        throw validation_error(graph_error::multiple_exits,
                               "more than one exit function");
    out.entry_ = sources[0];
    out.exit_ = sinks[0];

    // Kahn topological sort; leftovers mean a cycle.
    std::vector<int> indeg(n, 0);
    for (int i = 0; i < n; ++i) indeg[i] = static_cast<int>(out.preds_[i].size());
    std::deque<int> frontier{out.entry_};
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop_front();
        out.topo_.push_back(v);
        for (int s : out.succs_[v]) {
            if (--indeg[s] == 0) frontier.push_back(s);
        }
    }
    if (static_cast<int>(out.topo_.size()) != n)
        throw validation_error(graph_error::cycle_detected, "dependency cycle");

    // Every function must be reachable from entry and reach exit.
    std::vector<char> from_entry(n, 0), to_exit(n, 0);
    from_entry[out.entry_] = 1;
    for (int v : out.topo_) {
        if (!from_entry[v]) continue;
        for (int s : out.succs_[v]) from_entry[s] = 1;
    }
    to_exit[out.exit_] = 1;
    for (auto it = out.topo_.rbegin(); it != out.topo_.rend(); ++it) {
        if (!to_exit[*it]) continue;
        for (int p : out.preds_[*it]) to_exit[p] = 1;
    }
    for (int i = 0; i < n; ++i) {
        if (!from_entry[i] || !to_exit[i])
            throw validation_error(graph_error::unreachable_function,
                                   "function off every entry->exit path: " +
                                       out.functions_[i].name);
    }
    return out;
}

bool workflow_type::contains(int fn) const {
    return std::binary_search(members.begin(), members.end(), fn);
}

std::vector<int> workflow_type::member_predecessors(int fn) const {
    std::vector<int> out;
    for (auto [from, to] : edges)
        if (to == fn) out.push_back(from);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> workflow_type::member_successors(int fn) const {
    std::vector<int> out;
    for (auto [from, to] : edges)
        if (from == fn) out.push_back(to);
    std::sort(out.begin(), out.end());
    return out;
}

workflow_type derive_workflow_type(const validated_application& app,
                                   const std::set<int>& invoked, int type_id) {
    if (!invoked.count(app.entry()) || !invoked.count(app.exit()))
        throw std::invalid_argument("invoked set must contain entry and exit");
    for (int fn : invoked) {
        if (fn < 0 || fn >= app.size())
            throw std::out_of_range("invoked set references unknown function");
    }

    workflow_type type;
    type.id = type_id;
    type.members.assign(invoked.begin(), invoked.end());
    for (auto [from, to] : app.edges()) {
        if (invoked.count(from) && invoked.count(to)) type.edges.emplace_back(from, to);
    }

    // Reachability within the induced sub-graph, forward and backward.
    std::map<int, std::vector<int>> succ, pred;
    for (auto [from, to] : type.edges) {
        succ[from].push_back(to);
        pred[to].push_back(from);
    }
    auto reach = [&](int start, const std::map<int, std::vector<int>>& adj) {
        std::set<int> seen{start};
        std::deque<int> work{start};
        while (!work.empty()) {
            int v = work.front();
            work.pop_front();
            auto it = adj.find(v);
            if (it == adj.end()) continue;
            for (int nxt : it->second)
                if (seen.insert(nxt).second) work.push_back(nxt);
        }
        return seen;
    };
    std::set<int> fwd = reach(app.entry(), succ);
    std::set<int> bwd = reach(app.exit(), pred);
    for (int fn : type.members) {
        if (!fwd.count(fn) || !bwd.count(fn))
            throw validation_error(graph_error::disconnected_subgraph,
                                   "invoked set not connected entry->exit");
    }
    return type;
}

time_ms critical_path_exec_time(const validated_application& app,
                                const workflow_type& type) {
    std::map<int, time_ms> longest;
    for (int fn : app.topo_order()) {
        if (!type.contains(fn)) continue;
        time_ms best = 0;
        for (int p : type.member_predecessors(fn)) best = std::max(best, longest.at(p));
        longest[fn] = best + app.function(fn).exec_time_ms;
    }
    return longest.at(app.exit());
}

std::vector<int> ready_functions(const workflow_type& type,
                                 const std::set<int>& completed) {
    std::vector<int> out;
    for (int fn : type.members) {
        if (completed.count(fn)) continue;
        bool ready = true;
        for (int p : type.member_predecessors(fn)) {
            if (!completed.count(p)) {
                ready = false;
                break;
            }
        }
        if (ready) out.push_back(fn);
    }
    return out;
}

}  // namespace icps
