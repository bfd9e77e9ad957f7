#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "icps/metrics.hpp"
#include "support/builders.hpp"

using namespace icps;
using namespace icps::testing;

namespace {

event_log log_with_requests(std::vector<std::pair<time_ms, time_ms>> spans, int type_id) {
    event_log log;
    int id = 1;
    for (auto [arr, end] : spans) {
        request_outcome rq;
        rq.id = id++;
        rq.type_id = type_id;
        rq.arrival_ms = arr;
        rq.end_ms = end;
        log.requests.push_back(rq);
    }
    return log;
}

instance_record killed_instance(int id, time_ms created, time_ms killed, time_ms idle,
                                mem_mb memory) {
    instance_record r;
    r.id = id;
    r.function = 1;
    r.node = 1;
    r.state = instance_state::killed;
    r.memory_mb = memory;
    r.created_at = created;
    r.killed_at = killed;
    r.idle_accum_ms = idle;
    return r;
}

}  // namespace

TEST_CASE("a request with no overhead scores a response efficiency of one") {
    event_log log = log_with_requests({{0, 100}}, 1);
    CHECK(response_efficiency(log, {{1, 100}}) == 1.0);
}

TEST_CASE("response efficiency is the exec-over-response ratio") {
    // exec {100, 200}, responses {150, 250} -> 300/400
    event_log log = log_with_requests({{0, 150}, {0, 250}}, 1);
    std::map<int, time_ms> cp{{1, 100}};
    log.requests[1].type_id = 2;
    cp[2] = 200;
    CHECK(response_efficiency(log, cp) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("a cold start inflates the response and lowers the ratio") {
    event_log log = log_with_requests({{0, 300}}, 1);  // 100 exec + 200 cold start
    CHECK(response_efficiency(log, {{1, 100}}) == doctest::Approx(100.0 / 300.0));
}

TEST_CASE("an unfinished request makes the log incomplete") {
    event_log log = log_with_requests({{0, 100}}, 1);
    log.requests[0].end_ms = -1;
    CHECK_THROWS_AS(response_efficiency(log, {{1, 100}}), incomplete_log);
}

TEST_CASE("resource utilization weighs idle time") {
    event_log log;
    log.instances.push_back(killed_instance(1, 0, 10000, 4000, 128));
    CHECK(resource_utilization(log) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("never-idle instances use all their resources") {
    event_log log;
    log.instances.push_back(killed_instance(1, 0, 500, 0, 64));
    log.instances.push_back(killed_instance(2, 100, 900, 0, 256));
    CHECK(resource_utilization(log) == 1.0);
}

TEST_CASE("equal-memory instances with opposite idle fractions average out") {
    event_log log;
    log.instances.push_back(killed_instance(1, 0, 1000, 0, 128));
    log.instances.push_back(killed_instance(2, 0, 1000, 1000, 128));
    CHECK(resource_utilization(log) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("a live instance poisons the utilization") {
    event_log log;
    instance_record r = killed_instance(1, 0, 100, 0, 10);
    r.state = instance_state::paused;
    log.instances.push_back(r);
    CHECK_THROWS_AS(resource_utilization(log), unterminated_instance);
}

TEST_CASE("the objective is the product of both ratios") {
    CHECK(objective(0.75, 0.6) == doctest::Approx(0.45).epsilon(1e-12));
    CHECK(objective(0.0, 0.9) == 0.0);
    CHECK(objective(1.0, 1.0) == 1.0);
}

TEST_CASE("rpd follows the literal and positive conventions") {
    CHECK(rpd(0.4, 0.5, rpd_convention::literal) == doctest::Approx(-20.0).epsilon(1e-12));
    CHECK(rpd(0.4, 0.5, rpd_convention::positive) == doctest::Approx(25.0).epsilon(1e-12));
    CHECK(rpd(0.4, 0.4, rpd_convention::literal) == 0.0);
    CHECK(rpd(0.4, 0.4, rpd_convention::positive) == 0.0);
}

TEST_CASE("rpd guards against a zero reference") {
    CHECK_THROWS_AS(rpd(0.4, 0.0, rpd_convention::literal), division_by_zero);
    CHECK_THROWS_AS(rpd(0.0, 0.4, rpd_convention::positive), division_by_zero);
}

TEST_CASE("the report glues the quantities together") {
    workload wl = single_type_workload(chain_app({fn("a", 100, 50)}), {0});
    event_log log = log_with_requests({{0, 200}}, 1);
    log.instances.push_back(killed_instance(1, 0, 1000, 500, 50));
    log.cold_start_count = 1;
    log.transfer_latency_ms = 10;
    log.node_count = 2;
    metrics_report r = compute_report(log, wl.app, wl.types);
    CHECK(r.phi_resp == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.phi_resource == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.eta == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.cold_start_count == 1);
    CHECK(r.transfer_latency_ms == 10);
    CHECK(r.request_count == 1);
    CHECK(r.instance_count == 1);
}
