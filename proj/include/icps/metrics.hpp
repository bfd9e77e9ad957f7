#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "icps/event.hpp"
#include "icps/workflow.hpp"

namespace icps {

class incomplete_log : public std::runtime_error {
  public:
    incomplete_log() : std::runtime_error("log contains unfinished requests") {}
};

class unterminated_instance : public std::runtime_error {
  public:
    explicit unterminated_instance(int id)
        : std::runtime_error("instance " + std::to_string(id) + " not terminated") {}
};

class division_by_zero : public std::runtime_error {
  public:
    division_by_zero() : std::runtime_error("reference objective is zero") {}
};

struct metrics_report {
    double phi_resp = 1.0;
    double phi_resource = 1.0;
    double eta = 1.0;
    std::vector<time_ms> response_times_ms;
    int cold_start_count = 0;
    std::int64_t transfer_latency_ms = 0;
    int instance_count = 0;   // P: instances actually created
    int request_count = 0;    // M
    int node_count = 0;       // W: nodes ever in service
    int prewarm_failures = 0;
    bool complete = true;
    std::int64_t exec_total_ms = 0;        // numerator of phi_resp
    std::int64_t resp_total_ms = 0;        // denominator
    std::int64_t cost_exec_mb_ms = 0;      // numerator of phi_resource
    std::int64_t cost_total_mb_ms = 0;     // denominator
};

// sum of per-type critical path exec times over sum of response times
double response_efficiency(const event_log& log,
                           const std::map<int, time_ms>& critical_path_by_type);

// sum of instance exec costs over sum of total costs
double resource_utilization(const event_log& log);

double objective(double phi_resp, double phi_resource);

enum class rpd_convention { literal, positive };

// Relative percentage deviation of a run against the best (minimum)
// objective among compared runs. The literal convention divides by the
// current run; the positive one by the best, flipping the sign.
double rpd(double eta_best, double eta_current, rpd_convention conv);

metrics_report compute_report(const event_log& log, const validated_application& app,
                              const std::vector<workflow_type>& types);

std::map<int, time_ms> critical_paths_by_type(const validated_application& app,
                                              const std::vector<workflow_type>& types);

void report_to_json(const metrics_report& report, std::ostream& out);
std::string report_csv_header();
std::string report_csv_row(const metrics_report& report);

}  // namespace icps
