#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "icps/cluster.hpp"
#include "icps/event.hpp"
#include "icps/prediction.hpp"
#include "icps/scheduler.hpp"
#include "icps/workflow.hpp"

namespace icps {

struct sim_config {
    time_ms duration_ms = 800000;
    time_ms interval_ms = 60000;
    time_ms keep_alive_ms = 10000;
    network_model network{10};
    int node_count = 10;
    mem_mb node_memory_mb = 1000;
    std::uint64_t seed = 1;
    bool allow_new_nodes = true;
    bool check_invariants = true;
};

// Frozen view of the system between event applications.
struct system_snapshot {
    time_ms clock = 0;
    std::vector<worker_node> nodes;
    std::vector<instance_record> instances;
    int pending_invocations = 0;
};

// Deterministic discrete-event simulator. Owns all mutable cluster state;
// policy strategies are pure functions evaluated against that state while an
// event is applied. Identical (config, policies, workload) inputs produce
// byte-identical logs.
class simulation {
  public:
    simulation(sim_config cfg, const validated_application& app,
               std::vector<workflow_type> types,
               std::vector<workflow_request> requests, policy_bundle bundle);

    // Testing/warm-start hook: a paused instance present at time zero.
    void seed_paused_instance(int function, int node_id);

    void schedule(event ev);  // throws past_event

    const event_log& run();

    system_snapshot snapshot() const;

    time_ms clock() const { return clock_; }
    const std::vector<worker_node>& nodes() const { return nodes_; }

  private:
    enum class inv_phase { waiting, routable, deferred, assigned, running, done };

    struct invocation_state {
        inv_phase phase = inv_phase::waiting;
        int remaining_preds = 0;
        std::vector<std::pair<int, int>> pred_nodes;  // (pred fn, node or -1)
        int instance = -1;
        int pending_data = 0;
        bool data_computed = false;
        bool defer_logged = false;
    };

    struct request_state {
        int type_index = 0;
        time_ms arrival = 0;
        time_ms end = -1;
        int remaining = 0;  // members not yet done
        std::map<int, invocation_state> inv;  // keyed by function index
    };

    struct instance_rt {
        instance_record rec;
        std::deque<std::pair<int, int>> queue;  // (request id, function)
        time_ms busy_until = 0;
        int pause_epoch = 0;
        bool demand = false;
        bool cancelled = false;
    };

    // event application
    void apply(const event& ev);
    void on_workflow_arrival(const event& ev);
    void on_interval_tick(const event& ev);
    void on_creation_complete(const event& ev);
    void on_function_complete(const event& ev);
    void on_data_arrival(const event& ev);
    void on_keep_alive_expire(const event& ev);

    // scheduling actions
    void icps_tick_actions();
    void pool_tick_actions(bool adapt);
    void pool_maintain(int fn);
    bool prewarm_one(int fn);
    int create_demand_instance(int fn, std::optional<int> forced_node);
    void deploy_on(int instance_id, int node_id);
    int add_node();
    void retry_pending_deployments();

    // routing
    void route_invocation(int req, int fn);
    void route_baseline(int req, int fn);
    void route_icps_swpas(int req, int fn);
    void route_icps_sfepas(int req, int fn);
    void route_icps_mncpas(int req, int fn);
    void assign_invocation(int req, int fn, int instance_id);
    void defer_invocation(int req, int fn);
    void wake_deferred();
    std::vector<routing_candidate> candidates_for(int fn) const;
    int idle_instance_of(int fn, std::optional<int> node_filter) const;

    // lifecycle plumbing
    void compute_data_transfers(int req, int fn);
    void try_start(int instance_id);
    void enter_paused(int instance_id, time_ms keep_alive);
    void expire_instance(int instance_id);
    void complete_function(int req, int fn, int node,
                           std::vector<std::pair<int, int>>& routable);
    void finish_request(int req);

    // helpers
    std::int64_t alive_count(int fn) const;
    std::set<int> predecessor_nodes(int fn) const;
    instance_rt& inst(int id) { return instances_.at(id - 1); }
    const instance_rt& inst(int id) const { return instances_.at(id - 1); }
    worker_node& node(int id) { return nodes_.at(id - 1); }
    request_state& req_state(int id) { return requests_state_.at(id - 1); }
    const function_spec& fn_spec(int fn) const { return app_->function(fn); }
    const workflow_type& type_of(int req) const {
        return types_[requests_state_[req - 1].type_index];
    }
    std::uint64_t next_seq() { return seq_++; }
    void log_event(log_kind kind, const event& ev);
    log_record base_record(log_kind kind);
    void check_memory_invariants() const;
    void train_lstm_offline();
    void close_interval();
    void force_drain();

    sim_config cfg_;
    const validated_application* app_;
    std::vector<workflow_type> types_;
    std::map<int, int> type_index_by_id_;
    std::vector<workflow_request> requests_;
    policy_bundle bundle_;

    std::priority_queue<event, std::vector<event>, event_after> queue_;
    time_ms clock_ = 0;
    std::uint64_t seq_ = 0;

    std::vector<worker_node> nodes_;
    std::vector<instance_rt> instances_;
    std::vector<std::vector<int>> fn_instances_;  // live instance ids per function
    std::vector<request_state> requests_state_;
    std::vector<std::pair<int, int>> deferred_;   // (request, function) FIFO
    std::vector<int> pending_deployments_;        // undeployed instance ids

    concurrency_history history_;
    std::vector<std::int64_t> cur_type_counts_;
    std::vector<std::int64_t> cur_fn_creations_;
    std::unique_ptr<concurrency_predictor> predictor_;

    std::map<int, int> bindings_;                 // request -> node (mncpas)
    std::vector<int> pool_target_;
    std::vector<char> pool_missed_, pool_consumed_;

    int incomplete_requests_ = 0;
    int creating_count_ = 0;

    event_log log_;
    bool ran_ = false;
};

}  // namespace icps
