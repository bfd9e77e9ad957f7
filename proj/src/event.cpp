#include "icps/event.hpp"

#include <array>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace icps {

namespace {
constexpr std::array<const char*, 14> kKindNames = {
    "interval_tick",   "keep_alive_expire", "creation_complete",
    "function_complete", "data_arrival",    "workflow_arrival",
    "instance_deployed", "node_created",    "function_start",
    "request_complete",  "routing_deferred", "prewarm_failed",
    "forced_expire",     "creation_cancelled",
};
}  // namespace

const char* to_string(log_kind k) { return kKindNames.at(static_cast<size_t>(k)); }

log_kind log_kind_from_string(const std::string& s) {
    for (size_t i = 0; i < kKindNames.size(); ++i) {
        if (s == kKindNames[i]) return static_cast<log_kind>(i);
    }
    throw std::invalid_argument("unknown log record kind: " + s);
}

void event_log::to_ndjson(std::ostream& out) const {
    for (const auto& r : records) {
        nlohmann::json j;
        j["time"] = r.time;
        j["seq"] = r.seq;
        j["kind"] = to_string(r.kind);
        if (r.request >= 0) j["request"] = r.request;
        if (r.function >= 0) j["function"] = r.function;
        if (r.instance >= 0) j["instance"] = r.instance;
        if (r.node >= 0) j["node"] = r.node;
        if (r.interval >= 0) j["interval"] = r.interval;
        if (r.latency_ms >= 0) j["latency_ms"] = r.latency_ms;
        if (r.memory_mb >= 0) j["memory_mb"] = r.memory_mb;
        if (r.demand >= 0) j["demand"] = r.demand;
        out << j.dump() << '\n';
    }
}

std::vector<log_record> parse_ndjson_log(std::istream& in) {
    std::vector<log_record> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        log_record r;
        r.time = j.at("time").get<time_ms>();
        r.seq = j.at("seq").get<std::uint64_t>();
        r.kind = log_kind_from_string(j.at("kind").get<std::string>());
        r.request = j.value("request", -1);
        r.function = j.value("function", -1);
        r.instance = j.value("instance", -1);
        r.node = j.value("node", -1);
        r.interval = j.value("interval", -1);
        r.latency_ms = j.value("latency_ms", static_cast<time_ms>(-1));
        r.memory_mb = j.value("memory_mb", static_cast<mem_mb>(-1));
        r.demand = j.value("demand", -1);
        out.push_back(r);
    }
    return out;
}

}  // namespace icps
