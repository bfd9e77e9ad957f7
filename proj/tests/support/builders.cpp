#include "support/builders.hpp"

#include <algorithm>
#include <numeric>

namespace icps::testing {

function_spec fn(const std::string& name, time_ms exec, mem_mb memory,
                 time_ms cold_start) {
    function_spec f;
    f.name = name;
    f.exec_time_ms = exec;
    f.memory_mb = memory;
    f.cold_start_ms = cold_start;
    return f;
}

static function_spec marker(const std::string& name) {
    function_spec f;
    f.name = name;
    f.exec_time_ms = 0;
    f.memory_mb = 0;
    f.cold_start_ms = 0;
    return f;
}

workflow_application chain_app(const std::vector<function_spec>& inner) {
    workflow_application app;
    app.functions.push_back(marker("entry"));
    for (const auto& f : inner) app.functions.push_back(f);
    app.functions.push_back(marker("exit"));
    for (int i = 0; i + 1 < static_cast<int>(app.functions.size()); ++i)
        app.edges.emplace_back(i, i + 1);
    return app;
}

workflow_application diamond_app(time_ms exec_b, time_ms exec_c, mem_mb mem_b,
                                 mem_mb mem_c) {
    workflow_application app;
    app.functions.push_back(marker("entry"));
    app.functions.push_back(fn("b", exec_b, mem_b));
    app.functions.push_back(fn("c", exec_c, mem_c));
    app.functions.push_back(marker("exit"));
    app.edges = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
    return app;
}

workflow_application random_dag(std::mt19937_64& rng, int max_inner,
                                time_ms exec_max, mem_mb mem_max) {
    const int inner = static_cast<int>(draw(rng, 1, max_inner));
    workflow_application app;
    app.functions.push_back(marker("entry"));
    for (int i = 0; i < inner; ++i)
        app.functions.push_back(fn("f" + std::to_string(i + 1),
                                   draw(rng, 1, exec_max), draw(rng, 1, mem_max)));
    app.functions.push_back(marker("exit"));
    const int exit_idx = inner + 1;

    // forward edges over the natural order keep the graph acyclic;
    // every inner node gets at least one parent and one child
    for (int i = 1; i <= inner; ++i) {
        std::vector<int> parents;
        for (int p = 0; p < i; ++p)
            if (p == 0 || draw(rng, 0, 2) == 0) parents.push_back(p);
        if (parents.size() > 1 && draw(rng, 0, 1) == 0) parents.erase(parents.begin());
        for (int p : parents) app.edges.emplace_back(p, i);
    }
    for (int i = 1; i <= inner; ++i) {
        bool has_child = false;
        for (auto [from, to] : app.edges)
            if (from == i) { has_child = true; break; }
        if (!has_child || draw(rng, 0, 3) == 0) app.edges.emplace_back(i, exit_idx);
    }
    // ensure entry has an edge even for inner = 0 shapes
    bool entry_out = false;
    for (auto [from, to] : app.edges)
        if (from == 0) { entry_out = true; break; }
    if (!entry_out) app.edges.emplace_back(0, 1);

    std::sort(app.edges.begin(), app.edges.end());
    app.edges.erase(std::unique(app.edges.begin(), app.edges.end()), app.edges.end());
    return app;
}

workflow_application random_graph_soup(std::mt19937_64& rng, int max_nodes) {
    const int n = static_cast<int>(draw(rng, 2, max_nodes));
    workflow_application app;
    for (int i = 0; i < n; ++i)
        app.functions.push_back(fn("g" + std::to_string(i), 10, 10));
    const int edges = static_cast<int>(draw(rng, 1, 2 * n));
    for (int e = 0; e < edges; ++e) {
        int a = static_cast<int>(draw(rng, 0, n - 1));
        int b = static_cast<int>(draw(rng, 0, n - 1));
        if (a != b) app.edges.emplace_back(a, b);
    }
    std::sort(app.edges.begin(), app.edges.end());
    app.edges.erase(std::unique(app.edges.begin(), app.edges.end()), app.edges.end());
    return app;
}

std::vector<workflow_type> random_path_types(std::mt19937_64& rng,
                                             const validated_application& app,
                                             int want) {
    std::set<std::set<int>> seen;
    std::vector<workflow_type> types;
    for (int attempt = 0; attempt < want * 20 && static_cast<int>(types.size()) < want;
         ++attempt) {
        std::set<int> members{app.entry()};
        int cur = app.entry();
        while (cur != app.exit()) {
            const auto& succs = app.successors(cur);
            cur = succs[draw(rng, 0, static_cast<int>(succs.size()) - 1)];
            members.insert(cur);
        }
        if (!seen.insert(members).second) continue;
        types.push_back(derive_workflow_type(app, members,
                                             static_cast<int>(types.size()) + 1));
    }
    return types;
}

std::vector<workflow_request> constant_rate_requests(int per_interval, int intervals,
                                                     time_ms interval_ms,
                                                     int type_count) {
    std::vector<workflow_request> out;
    const time_ms gap = interval_ms / per_interval;
    int id = 1;
    for (int k = 0; k < intervals; ++k) {
        for (int i = 0; i < per_interval; ++i) {
            workflow_request rq;
            rq.id = id++;
            rq.type_id = (i % type_count) + 1;
            rq.arrival_ms = k * interval_ms + i * gap;
            out.push_back(rq);
        }
    }
    return out;
}

workload single_type_workload(const workflow_application& app,
                              std::vector<time_ms> arrivals) {
    workload wl;
    wl.app = validate_application(app);
    std::set<int> all;
    for (int i = 0; i < wl.app.size(); ++i) all.insert(i);
    wl.types.push_back(derive_workflow_type(wl.app, all, 1));
    std::sort(arrivals.begin(), arrivals.end());
    for (size_t i = 0; i < arrivals.size(); ++i)
        wl.requests.push_back(workflow_request{static_cast<int>(i) + 1, 1, arrivals[i]});
    return wl;
}

}  // namespace icps::testing
