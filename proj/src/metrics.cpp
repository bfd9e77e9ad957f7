#include "icps/metrics.hpp"

#include <ostream>
#include <sstream>

#include <json.hpp>

#include "icps/cluster.hpp"

namespace icps {

std::map<int, time_ms> critical_paths_by_type(const validated_application& app,
                                              const std::vector<workflow_type>& types) {
    std::map<int, time_ms> out;
    for (const auto& type : types) out[type.id] = critical_path_exec_time(app, type);
    return out;
}

double response_efficiency(const event_log& log,
                           const std::map<int, time_ms>& critical_path_by_type) {
    std::int64_t exec_total = 0, resp_total = 0;
    for (const auto& rq : log.requests) {
        if (!rq.completed()) throw incomplete_log();
        exec_total += critical_path_by_type.at(rq.type_id);
        resp_total += rq.response_ms();
    }
    if (resp_total == 0) return 1.0;  // no requests, or all-virtual paths
    return static_cast<double>(exec_total) / static_cast<double>(resp_total);
}

double resource_utilization(const event_log& log) {
    std::int64_t exec = 0, total = 0;
    for (const auto& rec : log.instances) {
        if (rec.state != instance_state::killed) throw unterminated_instance(rec.id);
        instance_costs_result c = instance_costs(rec);
        exec += c.exec_mb_ms;
        total += c.total_mb_ms;
    }
    if (total == 0) return 1.0;
    return static_cast<double>(exec) / static_cast<double>(total);
}

double objective(double phi_resp, double phi_resource) {
    return phi_resp * phi_resource;
}

double rpd(double eta_best, double eta_current, rpd_convention conv) {
    if (conv == rpd_convention::literal) {
        if (eta_current == 0.0) throw division_by_zero();
        return 100.0 * (eta_best - eta_current) / eta_current;
    }
    if (eta_best == 0.0) throw division_by_zero();
    return 100.0 * (eta_current - eta_best) / eta_best;
}

metrics_report compute_report(const event_log& log, const validated_application& app,
                              const std::vector<workflow_type>& types) {
    metrics_report r;
    r.request_count = static_cast<int>(log.requests.size());
    r.instance_count = static_cast<int>(log.instances.size());
    r.node_count = log.node_count;
    r.cold_start_count = log.cold_start_count;
    r.transfer_latency_ms = log.transfer_latency_ms;
    r.prewarm_failures = log.prewarm_failures;
    r.complete = log.complete;

    const auto cps = critical_paths_by_type(app, types);
    for (const auto& rq : log.requests) {
        if (!rq.completed()) continue;
        r.exec_total_ms += cps.at(rq.type_id);
        r.resp_total_ms += rq.response_ms();
        r.response_times_ms.push_back(rq.response_ms());
    }
    r.phi_resp = r.resp_total_ms == 0
                     ? 1.0
                     : static_cast<double>(r.exec_total_ms) /
                           static_cast<double>(r.resp_total_ms);

    for (const auto& rec : log.instances) {
        if (rec.state != instance_state::killed) throw unterminated_instance(rec.id);
        instance_costs_result c = instance_costs(rec);
        r.cost_exec_mb_ms += c.exec_mb_ms;
        r.cost_total_mb_ms += c.total_mb_ms;
    }
    r.phi_resource = r.cost_total_mb_ms == 0
                         ? 1.0
                         : static_cast<double>(r.cost_exec_mb_ms) /
                               static_cast<double>(r.cost_total_mb_ms);
    r.eta = objective(r.phi_resp, r.phi_resource);
    return r;
}

void report_to_json(const metrics_report& r, std::ostream& out) {
    nlohmann::json j;
    j["phi_resp"] = r.phi_resp;
    j["phi_resource"] = r.phi_resource;
    j["eta"] = r.eta;
    j["requests"] = r.request_count;
    j["instances"] = r.instance_count;
    j["nodes"] = r.node_count;
    j["cold_starts"] = r.cold_start_count;
    j["transfer_latency_ms"] = r.transfer_latency_ms;
    j["prewarm_failures"] = r.prewarm_failures;
    j["complete"] = r.complete;
    j["exec_total_ms"] = r.exec_total_ms;
    j["resp_total_ms"] = r.resp_total_ms;
    j["cost_exec_mb_ms"] = r.cost_exec_mb_ms;
    j["cost_total_mb_ms"] = r.cost_total_mb_ms;
    j["response_times_ms"] = r.response_times_ms;
    out << j.dump(2) << '\n';
}

std::string report_csv_header() {
    return "phi_resp,phi_resource,eta,requests,instances,nodes,cold_starts,"
           "transfer_latency_ms,prewarm_failures,complete";
}

std::string report_csv_row(const metrics_report& r) {
    std::ostringstream os;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", r.phi_resp);
    os << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.12g", r.phi_resource);
    os << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.12g", r.eta);
    os << buf << ',';
    os << r.request_count << ',' << r.instance_count << ',' << r.node_count << ','
       << r.cold_start_count << ',' << r.transfer_latency_ms << ','
       << r.prewarm_failures << ',' << (r.complete ? 1 : 0);
    return os.str();
}

}  // namespace icps
