#include "icps/workload.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace icps {

namespace {

// modulo draw: slightly biased, but stable across standard library versions
std::int64_t draw_range(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

workload load_trace(std::istream& in, time_ms default_cold_start_ms) {
    std::vector<trace_record> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw trace_parse_error(line_no, e.what());
        }
        trace_record rec;
        if (!j.contains("workflow")) throw missing_field(line_no, "workflow");
        if (!j.contains("arrival_ms")) throw missing_field(line_no, "arrival_ms");
        if (!j.contains("functions")) throw missing_field(line_no, "functions");
        rec.workflow = j["workflow"].get<std::string>();
        rec.arrival_ms = j["arrival_ms"].get<time_ms>();
        if (rec.arrival_ms < 0) throw trace_parse_error(line_no, "negative arrival");
        for (const auto& fj : j["functions"]) {
            trace_function fn;
            if (!fj.contains("name")) throw missing_field(line_no, "name");
            if (!fj.contains("exec_ms")) throw missing_field(line_no, "exec_ms");
            if (!fj.contains("memory_mb")) throw missing_field(line_no, "memory_mb");
            fn.name = fj["name"].get<std::string>();
            fn.exec_ms = fj["exec_ms"].get<time_ms>();
            fn.memory_mb = fj["memory_mb"].get<mem_mb>();
            if (fj.contains("cold_start_ms"))
                fn.cold_start_ms = fj["cold_start_ms"].get<time_ms>();
            if (fn.exec_ms <= 0) throw trace_parse_error(line_no, "exec_ms must be > 0");
            if (fn.memory_mb <= 0)
                throw trace_parse_error(line_no, "memory_mb must be > 0");
            rec.functions.push_back(std::move(fn));
        }
        if (j.contains("edges")) {
            for (const auto& ej : j["edges"]) {
                if (!ej.is_array() || ej.size() != 2)
                    throw trace_parse_error(line_no, "edge must be a [from, to] pair");
                rec.edges.emplace_back(ej[0].get<std::string>(),
                                       ej[1].get<std::string>());
            }
        }
        records.push_back(std::move(rec));
    }

    workload wl;
    if (records.empty()) return wl;

    // union of all recorded sub-graphs, functions deduplicated by name
    std::map<std::string, function_spec> by_name;
    std::set<std::pair<std::string, std::string>> edge_names;
    for (const auto& rec : records) {
        for (const auto& fn : rec.functions) {
            function_spec spec;
            spec.name = fn.name;
            spec.exec_time_ms = fn.exec_ms;
            spec.memory_mb = fn.memory_mb;
            spec.cold_start_ms = fn.cold_start_ms.value_or(default_cold_start_ms);
            auto [it, inserted] = by_name.emplace(fn.name, spec);
            if (!inserted) {
                const auto& prev = it->second;
                if (prev.exec_time_ms != spec.exec_time_ms ||
                    prev.memory_mb != spec.memory_mb ||
                    prev.cold_start_ms != spec.cold_start_ms)
                    throw inconsistent_function(fn.name);
            }
        }
        for (const auto& e : rec.edges) edge_names.insert(e);
    }

    workflow_application app;
    std::map<std::string, int> index;
    for (const auto& [name, spec] : by_name) {
        index[name] = static_cast<int>(app.functions.size());
        app.functions.push_back(spec);
    }
    for (const auto& [from, to] : edge_names) {
        if (!index.count(from) || !index.count(to))
            throw trace_parse_error(0, "edge references unrecorded function");
        app.edges.emplace_back(index[from], index[to]);
    }
    wl.app = validate_application(app);

    // distinct function sets become types
    std::map<std::set<int>, int> type_by_members;
    struct pending { int type_id; time_ms arrival; };
    std::vector<pending> reqs;
    for (const auto& rec : records) {
        std::set<int> members;
        for (const auto& fn : rec.functions) members.insert(index[fn.name]);
        auto it = type_by_members.find(members);
        int tid;
        if (it == type_by_members.end()) {
            tid = static_cast<int>(wl.types.size()) + 1;
            wl.types.push_back(derive_workflow_type(wl.app, members, tid));
            type_by_members.emplace(members, tid);
        } else {
            tid = it->second;
        }
        reqs.push_back({tid, rec.arrival_ms});
    }
    std::stable_sort(reqs.begin(), reqs.end(),
                     [](const pending& a, const pending& b) { return a.arrival < b.arrival; });
    for (size_t i = 0; i < reqs.size(); ++i)
        wl.requests.push_back(
            workflow_request{static_cast<int>(i) + 1, reqs[i].type_id, reqs[i].arrival});
    return wl;
}

workload load_trace_file(const std::string& path, time_ms default_cold_start_ms) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    return load_trace(in, default_cold_start_ms);
}

void serialize_trace(const workload& wl, std::ostream& out) {
    for (const auto& rq : wl.requests) {
        const workflow_type& type = wl.types.at(rq.type_id - 1);
        nlohmann::json j;
        j["workflow"] = "type" + std::to_string(type.id);
        j["arrival_ms"] = rq.arrival_ms;
        nlohmann::json fns = nlohmann::json::array();
        for (int fn : type.members) {
            const auto& spec = wl.app.function(fn);
            nlohmann::json fj;
            fj["name"] = spec.name;
            fj["exec_ms"] = spec.exec_time_ms;
            fj["memory_mb"] = spec.memory_mb;
            fj["cold_start_ms"] = spec.cold_start_ms;
            fns.push_back(fj);
        }
        j["functions"] = fns;
        nlohmann::json edges = nlohmann::json::array();
        for (auto [from, to] : type.edges) {
            edges.push_back({wl.app.function(from).name, wl.app.function(to).name});
        }
        j["edges"] = edges;
        out << j.dump() << '\n';
    }
}

workload generate_synthetic(const synthetic_params& p) {
    if (p.concurrency < 0 || p.depth < 1 || p.branch_factor < 1 || p.type_count < 1 ||
        p.window_ms <= 0 || p.exec_min_ms <= 0 || p.exec_max_ms < p.exec_min_ms ||
        p.memory_min_mb <= 0 || p.memory_max_mb < p.memory_min_mb ||
        p.cold_start_ms < 0)
        throw invalid_params("synthetic workload parameters out of range");

    std::mt19937_64 rng(p.seed);

    workflow_application app;
    function_spec entry;
    entry.name = "entry";
    entry.exec_time_ms = 0;
    entry.memory_mb = 0;
    entry.cold_start_ms = 0;
    app.functions.push_back(entry);

    // depth layers x branch_factor functions, fully connected between layers
    std::vector<std::vector<int>> layers(p.depth);
    for (int layer = 0; layer < p.depth; ++layer) {
        for (int b = 0; b < p.branch_factor; ++b) {
            function_spec fn;
            fn.name = "f" + std::to_string(layer + 1) + "_" + std::to_string(b + 1);
            fn.exec_time_ms = draw_range(rng, p.exec_min_ms, p.exec_max_ms);
            fn.memory_mb = draw_range(rng, p.memory_min_mb, p.memory_max_mb);
            fn.cold_start_ms = p.cold_start_ms;
            layers[layer].push_back(static_cast<int>(app.functions.size()));
            app.functions.push_back(fn);
        }
    }
    function_spec exitf;
    exitf.name = "exit";
    exitf.exec_time_ms = 0;
    exitf.memory_mb = 0;
    exitf.cold_start_ms = 0;
    const int exit_idx = static_cast<int>(app.functions.size());
    app.functions.push_back(exitf);

    for (int fn : layers[0]) app.edges.emplace_back(0, fn);
    for (int layer = 0; layer + 1 < p.depth; ++layer) {
        for (int a : layers[layer])
            for (int b : layers[layer + 1]) app.edges.emplace_back(a, b);
    }
    for (int fn : layers[p.depth - 1]) app.edges.emplace_back(fn, exit_idx);

    workload wl;
    wl.app = validate_application(app);

    // types: distinct entry->exit paths, one function per layer
    std::set<std::vector<int>> seen_paths;
    const std::int64_t max_types = [&] {
        std::int64_t n = 1;
        for (int layer = 0; layer < p.depth; ++layer) {
            n *= p.branch_factor;
            if (n >= p.type_count) return static_cast<std::int64_t>(p.type_count);
        }
        return n;
    }();
    while (static_cast<std::int64_t>(wl.types.size()) < max_types) {
        std::vector<int> path;
        for (int layer = 0; layer < p.depth; ++layer)
            path.push_back(
                layers[layer][draw_range(rng, 0, p.branch_factor - 1)]);
        if (!seen_paths.insert(path).second) continue;
        std::set<int> members(path.begin(), path.end());
        members.insert(0);
        members.insert(exit_idx);
        const int tid = static_cast<int>(wl.types.size()) + 1;
        wl.types.push_back(derive_workflow_type(wl.app, members, tid));
    }

    // type mix drawn once, then arrivals uniform over the window
    std::vector<std::int64_t> weights;
    std::int64_t weight_sum = 0;
    for (size_t s = 0; s < wl.types.size(); ++s) {
        weights.push_back(draw_range(rng, 1, 100));
        weight_sum += weights.back();
    }
    struct pending { time_ms arrival; int type_id; };
    std::vector<pending> reqs;
    reqs.reserve(p.concurrency);
    for (int i = 0; i < p.concurrency; ++i) {
        const time_ms arrival = draw_range(rng, 0, p.window_ms - 1);
        std::int64_t pick = draw_range(rng, 0, weight_sum - 1);
        int tid = 1;
        for (size_t s = 0; s < weights.size(); ++s) {
            if (pick < weights[s]) {
                tid = static_cast<int>(s) + 1;
                break;
            }
            pick -= weights[s];
        }
        reqs.push_back({arrival, tid});
    }
    std::stable_sort(reqs.begin(), reqs.end(),
                     [](const pending& a, const pending& b) { return a.arrival < b.arrival; });
    for (size_t i = 0; i < reqs.size(); ++i)
        wl.requests.push_back(
            workflow_request{static_cast<int>(i) + 1, reqs[i].type_id, reqs[i].arrival});
    return wl;
}

}  // namespace icps
