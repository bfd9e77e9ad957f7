#include "icps/engine.hpp"

#include <algorithm>
#include <cassert>

#include "icps/httpredict.hpp"
#include "icps/placement.hpp"
#include "icps/routing.hpp"

namespace icps {

simulation::simulation(sim_config cfg, const validated_application& app,
                       std::vector<workflow_type> types,
                       std::vector<workflow_request> requests, policy_bundle bundle)
    : cfg_(cfg), app_(&app), types_(std::move(types)),
      requests_(std::move(requests)), bundle_(std::move(bundle)) {
    if (cfg_.duration_ms <= 0 || cfg_.interval_ms <= 0 || cfg_.node_count < 1)
        throw std::invalid_argument("sim config: duration, interval and node count must be positive");

    for (size_t i = 0; i < types_.size(); ++i) {
        // history columns and forecast entries are keyed by position
        if (types_[i].id != static_cast<int>(i) + 1)
            throw std::invalid_argument("workflow type ids must be contiguous from 1");
        type_index_by_id_.emplace(types_[i].id, static_cast<int>(i));
    }
    for (size_t i = 0; i < requests_.size(); ++i) {
        if (i > 0 && requests_[i].arrival_ms < requests_[i - 1].arrival_ms)
            throw std::invalid_argument("requests must be sorted by arrival time");
        if (!type_index_by_id_.count(requests_[i].type_id))
            throw std::invalid_argument("request references unknown type");
    }

    nodes_.reserve(cfg_.node_count);
    for (int w = 1; w <= cfg_.node_count; ++w)
        nodes_.push_back(worker_node{w, cfg_.node_memory_mb, 0, {}});

    fn_instances_.assign(app_->size(), {});
    requests_state_.resize(requests_.size());
    incomplete_requests_ = static_cast<int>(requests_.size());

    const int type_count = static_cast<int>(types_.size());
    history_.type_count = type_count;
    history_.function_count = app_->size();
    cur_type_counts_.assign(type_count, 0);
    cur_fn_creations_.assign(app_->size(), 0);

    pool_target_.assign(app_->size(), bundle_.pool_size);
    pool_missed_.assign(app_->size(), 0);
    pool_consumed_.assign(app_->size(), 0);

    switch (bundle_.predictor) {
        case predictor_kind::naive:
            predictor_ = std::make_unique<naive_predictor>();
            break;
        case predictor_kind::lstm:
            train_lstm_offline();
            break;
        case predictor_kind::http:
            predictor_ = std::make_unique<http_predictor>(bundle_.predictor_url);
            break;
    }
}

void simulation::train_lstm_offline() {
    // Stand-in for historical data: the workload's own per-interval series,
    // earliest half, bucketed at the configured interval.
    const int type_count = static_cast<int>(types_.size());
    const int total_intervals =
        static_cast<int>((cfg_.duration_ms + cfg_.interval_ms - 1) / cfg_.interval_ms);
    std::vector<Eigen::VectorXd> series(
        std::max(1, total_intervals), Eigen::VectorXd::Zero(type_count));
    for (const auto& rq : requests_) {
        const int bucket = static_cast<int>(rq.arrival_ms / cfg_.interval_ms);
        if (bucket >= 0 && bucket < static_cast<int>(series.size()))
            series[bucket](type_index_by_id_.at(rq.type_id)) += 1.0;
    }

    lstm_model model =
        lstm_model::random_init(std::max(1, type_count), bundle_.lstm.hidden, cfg_.seed);
    const int len = bundle_.lstm.series_length;
    const int train_until = std::max(1, total_intervals / 2);
    std::vector<lstm_sample> dataset;
    for (int t = 1; t <= train_until && t < total_intervals; ++t) {
        lstm_series window;
        for (int k = t - len; k < t; ++k)
            window.push_back(k >= 0 ? series[k]
                                    : Eigen::VectorXd::Zero(type_count));
        dataset.emplace_back(std::move(window), series[t]);
    }
    if (!dataset.empty() && type_count > 0) {
        lstm_hyperparams hyper;
        hyper.learning_rate = bundle_.lstm.learning_rate;
        hyper.batch_size = bundle_.lstm.batch_size;
        hyper.epochs = bundle_.lstm.epochs;
        hyper.seed = cfg_.seed;
        lstm_train(model, dataset, hyper);
    }
    predictor_ = std::make_unique<lstm_predictor>(std::move(model),
                                                  bundle_.lstm.series_length);
}

void simulation::seed_paused_instance(int function, int node_id) {
    if (ran_) throw std::logic_error("cannot seed after run()");
    const auto& spec = fn_spec(function);
    worker_node& n = node(node_id);
    if (!can_host(n, spec.memory_mb))
        throw std::invalid_argument("seed node cannot host instance");

    instance_rt rt;
    rt.rec.id = static_cast<int>(instances_.size()) + 1;
    rt.rec.function = function;
    rt.rec.memory_mb = spec.memory_mb;
    rt.rec = transition(rt.rec, lifecycle_trigger::deploy, 0);
    rt.rec = transition(rt.rec, lifecycle_trigger::creation_complete, 0);
    rt.rec.node = node_id;
    instances_.push_back(rt);
    fn_instances_[function].push_back(rt.rec.id);
    n.used_mb += spec.memory_mb;
    n.resident.insert(rt.rec.id);

    log_record dep = base_record(log_kind::instance_deployed);
    dep.instance = rt.rec.id;
    dep.function = function;
    dep.node = node_id;
    dep.memory_mb = spec.memory_mb;
    dep.demand = 0;
    log_.append(dep);
    log_record cc = base_record(log_kind::creation_complete);
    cc.instance = rt.rec.id;
    cc.function = function;
    cc.node = node_id;
    log_.append(cc);

    event ev;
    ev.time = cfg_.keep_alive_ms;
    ev.kind = event_kind::keep_alive_expire;
    ev.instance = rt.rec.id;
    ev.epoch = inst(rt.rec.id).pause_epoch;
    schedule(ev);
}

void simulation::schedule(event ev) {
    if (ev.time < clock_) throw past_event(ev.time, clock_);
    ev.seq = next_seq();
    queue_.push(ev);
}

log_record simulation::base_record(log_kind kind) {
    log_record r;
    r.time = clock_;
    r.seq = next_seq();
    r.kind = kind;
    return r;
}

void simulation::log_event(log_kind kind, const event& ev) {
    log_record r;
    r.time = ev.time;
    r.seq = ev.seq;
    r.kind = kind;
    r.request = ev.request;
    r.function = ev.function;
    r.instance = ev.instance;
    r.interval = ev.interval;
    if (ev.kind == event_kind::data_arrival) r.latency_ms = ev.latency_ms;
    if (ev.instance >= 1 && inst(ev.instance).rec.node)
        r.node = *inst(ev.instance).rec.node;
    log_.append(r);
}

const event_log& simulation::run() {
    if (ran_) throw std::logic_error("run() already executed");
    ran_ = true;

    event tick;
    tick.time = 0;
    tick.kind = event_kind::interval_tick;
    tick.interval = 0;
    schedule(tick);
    for (const auto& rq : requests_) {
        event ev;
        ev.time = rq.arrival_ms;
        ev.kind = event_kind::workflow_arrival;
        ev.request = rq.id;
        schedule(ev);
    }

    while (!queue_.empty()) {
        if (incomplete_requests_ == 0 && deferred_.empty() && creating_count_ == 0 &&
            pending_deployments_.empty() && queue_.top().time >= cfg_.duration_ms)
            break;
        event ev = queue_.top();
        queue_.pop();
        clock_ = ev.time;
        apply(ev);
        if (cfg_.check_invariants) check_memory_invariants();
    }

    force_drain();
    return log_;
}

void simulation::apply(const event& ev) {
    switch (ev.kind) {
        case event_kind::interval_tick: on_interval_tick(ev); break;
        case event_kind::keep_alive_expire: on_keep_alive_expire(ev); break;
        case event_kind::creation_complete: on_creation_complete(ev); break;
        case event_kind::function_complete: on_function_complete(ev); break;
        case event_kind::data_arrival: on_data_arrival(ev); break;
        case event_kind::workflow_arrival: on_workflow_arrival(ev); break;
    }
}

void simulation::force_drain() {
    clock_ = std::max(clock_, cfg_.duration_ms);
    for (auto& rt : instances_) {
        if (rt.cancelled) continue;
        if (rt.rec.state == instance_state::undeployed) {
            rt.cancelled = true;
            log_record r = base_record(log_kind::creation_cancelled);
            r.instance = rt.rec.id;
            r.function = rt.rec.function;
            log_.append(r);
            continue;
        }
        if (rt.rec.state == instance_state::paused) {
            log_record r = base_record(log_kind::forced_expire);
            r.instance = rt.rec.id;
            r.function = rt.rec.function;
            r.node = rt.rec.node ? *rt.rec.node : -1;
            log_.append(r);
            expire_instance(rt.rec.id);
        }
    }

    for (size_t i = 0; i < requests_state_.size(); ++i) {
        request_outcome out;
        out.id = static_cast<int>(i) + 1;
        out.type_id = requests_[i].type_id;
        out.arrival_ms = requests_state_[i].arrival;
        out.end_ms = requests_state_[i].end;
        log_.requests.push_back(out);
        if (!out.completed()) log_.complete = false;
    }
    for (const auto& rt : instances_) {
        if (!rt.cancelled) log_.instances.push_back(rt.rec);
    }
    log_.node_count = static_cast<int>(nodes_.size());
}

// ---------------------------------------------------------------------------
// event handlers

void simulation::on_workflow_arrival(const event& ev) {
    log_event(log_kind::workflow_arrival, ev);
    const workflow_request& rq = requests_[ev.request - 1];
    request_state& st = req_state(ev.request);
    st.type_index = type_index_by_id_.at(rq.type_id);
    st.arrival = ev.time;
    const workflow_type& type = types_[st.type_index];
    st.remaining = static_cast<int>(type.members.size());
    for (int fn : type.members) {
        invocation_state iv;
        iv.remaining_preds = static_cast<int>(type.member_predecessors(fn).size());
        st.inv.emplace(fn, iv);
    }
    cur_type_counts_[st.type_index] += 1;

    std::vector<std::pair<int, int>> routable;
    const int entry = app_->entry();
    if (fn_spec(entry).is_virtual()) {
        log_record r = base_record(log_kind::function_complete);
        r.request = ev.request;
        r.function = entry;
        log_.append(r);
        complete_function(ev.request, entry, -1, routable);
    } else {
        routable.emplace_back(ev.request, entry);
    }
    for (auto [rid, fn] : routable) route_invocation(rid, fn);
}

void simulation::close_interval() {
    history_.push_interval(cur_type_counts_, cur_fn_creations_);
    std::fill(cur_type_counts_.begin(), cur_type_counts_.end(), 0);
    std::fill(cur_fn_creations_.begin(), cur_fn_creations_.end(), 0);
}

void simulation::on_interval_tick(const event& ev) {
    log_event(log_kind::interval_tick, ev);
    if (ev.interval >= 1) close_interval();

    const time_ms next = static_cast<time_ms>(ev.interval + 1) * cfg_.interval_ms;
    if (next < cfg_.duration_ms) {
        event tick;
        tick.time = next;
        tick.kind = event_kind::interval_tick;
        tick.interval = ev.interval + 1;
        schedule(tick);
    }

    switch (bundle_.mode) {
        case baseline_mode::icps: icps_tick_actions(); break;
        case baseline_mode::pool: pool_tick_actions(ev.interval >= 1); break;
        case baseline_mode::keep_alive: break;
    }
}

void simulation::on_creation_complete(const event& ev) {
    instance_rt& rt = inst(ev.instance);
    rt.rec = transition(rt.rec, lifecycle_trigger::creation_complete, clock_);
    --creating_count_;
    enter_paused(ev.instance, cfg_.keep_alive_ms);
    log_event(log_kind::creation_complete, ev);
    wake_deferred();
    try_start(ev.instance);
}

void simulation::on_function_complete(const event& ev) {
    const bool release_now = bundle_.mode == baseline_mode::icps &&
                             bundle_.routing == routing_strategy::mncpas;
    int done_node = -1;
    {
        instance_rt& rt = inst(ev.instance);
        rt.rec = transition(rt.rec, lifecycle_trigger::complete, clock_);
        done_node = rt.rec.node ? *rt.rec.node : -1;
        log_event(log_kind::function_complete, ev);
        if (release_now) {
            // released immediately: complete then expire at the same timestamp,
            // before any routing can reuse the instance
            log_record r = base_record(log_kind::keep_alive_expire);
            r.instance = ev.instance;
            r.function = rt.rec.function;
            r.node = done_node;
            log_.append(r);
            expire_instance(ev.instance);
        } else {
            enter_paused(ev.instance, cfg_.keep_alive_ms);
        }
    }

    std::vector<std::pair<int, int>> routable;
    complete_function(ev.request, ev.function, done_node, routable);
    wake_deferred();
    for (auto [rid, fn] : routable) route_invocation(rid, fn);
    if (!release_now) try_start(ev.instance);
}

void simulation::on_data_arrival(const event& ev) {
    log_event(log_kind::data_arrival, ev);
    log_.transfer_latency_ms += ev.latency_ms;
    request_state& st = req_state(ev.request);
    invocation_state& iv = st.inv.at(ev.function);
    if (--iv.pending_data == 0 && iv.instance >= 1) try_start(iv.instance);
}

void simulation::on_keep_alive_expire(const event& ev) {
    int fn = -1;
    {
        instance_rt& rt = inst(ev.instance);
        if (rt.rec.state != instance_state::paused || rt.pause_epoch != ev.epoch ||
            !rt.queue.empty())
            return;  // stale timer or instance has committed work
        fn = rt.rec.function;
        log_event(log_kind::keep_alive_expire, ev);
        expire_instance(ev.instance);
    }
    if (bundle_.mode == baseline_mode::pool && clock_ < cfg_.duration_ms)
        pool_maintain(fn);
    retry_pending_deployments();
    wake_deferred();
}

// ---------------------------------------------------------------------------
// scheduling actions

void simulation::icps_tick_actions() {
    if (bundle_.prediction == prediction_strategy::none) return;
    if (history_.intervals() == 0) return;

    prewarm_plan plan;
    if (bundle_.prediction == prediction_strategy::chscg) {
        plan = plan_chscg(history_, bundle_.chscg_window);
    } else {
        std::vector<std::int64_t> forecast =
            predict_workflow_concurrency(history_, *predictor_);
        plan = bundle_.prediction == prediction_strategy::fpcg
                   ? plan_fpcg(forecast, *app_)
                   : plan_bpcg(forecast, types_, app_->size());
    }

    for (int fn : app_->topo_order()) {
        if (fn_spec(fn).is_virtual()) continue;
        std::int64_t need = prewarm_delta(plan.count(fn), alive_count(fn));
        for (std::int64_t k = 0; k < need; ++k) {
            if (!prewarm_one(fn)) break;
        }
    }
}

void simulation::pool_tick_actions(bool adapt) {
    for (int fn : app_->topo_order()) {
        if (fn_spec(fn).is_virtual()) continue;
        if (adapt) {
            pool_target_[fn] =
                pool_adapt(pool_target_[fn], pool_missed_[fn], pool_consumed_[fn]);
            pool_missed_[fn] = 0;
            pool_consumed_[fn] = 0;
        }
        pool_maintain(fn);
    }
}

void simulation::pool_maintain(int fn) {
    std::int64_t warm = 0;
    for (int id : fn_instances_[fn]) {
        const instance_rt& rt = inst(id);
        if (rt.cancelled) continue;
        if (rt.rec.state == instance_state::creating ||
            rt.rec.state == instance_state::undeployed ||
            (rt.rec.state == instance_state::paused && rt.queue.empty()))
            ++warm;
    }
    for (std::int64_t k = warm; k < pool_target_[fn]; ++k) {
        if (!prewarm_one(fn)) break;
    }
}

bool simulation::prewarm_one(int fn) {
    const auto& spec = fn_spec(fn);
    const std::vector<int> preds = app_->real_predecessors(fn);
    placement_decision d =
        place(bundle_.placement, spec.memory_mb, nodes_, predecessor_nodes(fn),
              !preds.empty(), cfg_.allow_new_nodes);
    int node_id = -1;
    if (d.kind == placement_kind::existing_node) {
        node_id = d.node_id;
    } else if (d.kind == placement_kind::new_node && spec.memory_mb <= cfg_.node_memory_mb) {
        node_id = add_node();
    }
    if (node_id < 0) {
        ++log_.prewarm_failures;
        log_record r = base_record(log_kind::prewarm_failed);
        r.function = fn;
        log_.append(r);
        return false;
    }

    instance_rt rt;
    rt.rec.id = static_cast<int>(instances_.size()) + 1;
    rt.rec.function = fn;
    rt.rec.memory_mb = spec.memory_mb;
    rt.demand = false;
    instances_.push_back(rt);
    fn_instances_[fn].push_back(rt.rec.id);
    deploy_on(rt.rec.id, node_id);
    return true;
}

int simulation::create_demand_instance(int fn, std::optional<int> forced_node) {
    const auto& spec = fn_spec(fn);
    instance_rt rt;
    rt.rec.id = static_cast<int>(instances_.size()) + 1;
    rt.rec.function = fn;
    rt.rec.memory_mb = spec.memory_mb;
    rt.demand = true;
    instances_.push_back(rt);
    fn_instances_[fn].push_back(rt.rec.id);
    ++log_.cold_start_count;

    int node_id = -1;
    if (forced_node) {
        node_id = *forced_node;  // caller verified capacity
    } else {
        const std::vector<int> preds = app_->real_predecessors(fn);
        placement_decision d =
            place(bundle_.placement, spec.memory_mb, nodes_, predecessor_nodes(fn),
                  !preds.empty(), cfg_.allow_new_nodes);
        if (d.kind == placement_kind::existing_node) node_id = d.node_id;
        else if (d.kind == placement_kind::new_node &&
                 spec.memory_mb <= cfg_.node_memory_mb)
            node_id = add_node();
    }
    if (node_id >= 0) {
        deploy_on(rt.rec.id, node_id);
    } else {
        pending_deployments_.push_back(rt.rec.id);
    }
    return rt.rec.id;
}

void simulation::deploy_on(int instance_id, int node_id) {
    instance_rt& rt = inst(instance_id);
    rt.rec = transition(rt.rec, lifecycle_trigger::deploy, clock_);
    rt.rec.node = node_id;
    worker_node& n = node(node_id);
    n.used_mb += rt.rec.memory_mb;
    n.resident.insert(instance_id);
    ++creating_count_;
    cur_fn_creations_[rt.rec.function] += 1;

    log_record r = base_record(log_kind::instance_deployed);
    r.instance = instance_id;
    r.function = rt.rec.function;
    r.node = node_id;
    r.memory_mb = rt.rec.memory_mb;
    r.demand = rt.demand ? 1 : 0;
    log_.append(r);

    const time_ms ready = clock_ + fn_spec(rt.rec.function).cold_start_ms;
    rt.busy_until = ready;
    event ev;
    ev.time = ready;
    ev.kind = event_kind::creation_complete;
    ev.instance = instance_id;
    schedule(ev);

    for (auto [rid, fn] : rt.queue) {
        invocation_state& iv = req_state(rid).inv.at(fn);
        if (!iv.data_computed) compute_data_transfers(rid, fn);
    }
}

int simulation::add_node() {
    const int id = static_cast<int>(nodes_.size()) + 1;
    nodes_.push_back(worker_node{id, cfg_.node_memory_mb, 0, {}});
    log_record r = base_record(log_kind::node_created);
    r.node = id;
    r.memory_mb = cfg_.node_memory_mb;
    log_.append(r);
    return id;
}

void simulation::retry_pending_deployments() {
    if (pending_deployments_.empty()) return;
    std::vector<int> still;
    for (int id : pending_deployments_) {
        instance_rt& rt = inst(id);
        const std::vector<int> preds = app_->real_predecessors(rt.rec.function);
        placement_decision d = place(bundle_.placement, rt.rec.memory_mb, nodes_,
                                     predecessor_nodes(rt.rec.function),
                                     !preds.empty(), cfg_.allow_new_nodes);
        if (d.kind == placement_kind::existing_node) deploy_on(id, d.node_id);
        else still.push_back(id);
    }
    pending_deployments_ = std::move(still);
}

// ---------------------------------------------------------------------------
// routing

std::vector<routing_candidate> simulation::candidates_for(int fn) const {
    std::vector<routing_candidate> out;
    for (int id : fn_instances_[fn]) {
        const instance_rt& rt = inst(id);
        if (rt.cancelled || rt.rec.state == instance_state::killed) continue;
        routing_candidate c;
        c.instance_id = id;
        c.state = rt.rec.state;
        c.node_id = rt.rec.node ? *rt.rec.node : -1;
        c.queue_length = static_cast<int>(rt.queue.size());
        c.ready_at = rt.rec.state == instance_state::paused ? clock_ : rt.busy_until;
        if (rt.rec.node) c.node_free_mb = nodes_[*rt.rec.node - 1].free_mb();
        out.push_back(c);
    }
    return out;
}

int simulation::idle_instance_of(int fn, std::optional<int> node_filter) const {
    for (int id : fn_instances_[fn]) {
        const instance_rt& rt = inst(id);
        if (rt.cancelled || rt.rec.state != instance_state::paused) continue;
        if (!rt.queue.empty()) continue;
        if (node_filter && (!rt.rec.node || *rt.rec.node != *node_filter)) continue;
        return id;
    }
    return -1;
}

void simulation::route_invocation(int req, int fn) {
    invocation_state& iv = req_state(req).inv.at(fn);
    iv.phase = inv_phase::routable;
    if (bundle_.mode != baseline_mode::icps) {
        route_baseline(req, fn);
        return;
    }
    switch (bundle_.routing) {
        case routing_strategy::swpas: route_icps_swpas(req, fn); break;
        case routing_strategy::sfepas: route_icps_sfepas(req, fn); break;
        case routing_strategy::mncpas: route_icps_mncpas(req, fn); break;
    }
}

void simulation::route_baseline(int req, int fn) {
    const int idle = idle_instance_of(fn, std::nullopt);
    if (idle >= 1) {
        if (bundle_.mode == baseline_mode::pool) {
            pool_consumed_[fn] = 1;
            assign_invocation(req, fn, idle);
            if (clock_ < cfg_.duration_ms) pool_maintain(fn);
        } else {
            assign_invocation(req, fn, idle);
        }
        return;
    }
    if (bundle_.mode == baseline_mode::pool) pool_missed_[fn] = 1;
    const int fresh = create_demand_instance(fn, std::nullopt);
    assign_invocation(req, fn, fresh);
}

void simulation::route_icps_swpas(int req, int fn) {
    const auto& spec = fn_spec(fn);
    routing_decision d = route_swpas(candidates_for(fn), clock_, spec.cold_start_ms,
                                     spec.exec_time_ms);
    if (d.action == routing_action::assign) {
        assign_invocation(req, fn, d.instance_id);
    } else {
        const int fresh = create_demand_instance(fn, std::nullopt);
        assign_invocation(req, fn, fresh);
    }
}

void simulation::route_icps_sfepas(int req, int fn) {
    // one in-flight creation per parked invocation is enough
    int outstanding = 0;
    for (int id : fn_instances_[fn]) {
        const instance_rt& rt = inst(id);
        if (rt.cancelled) continue;
        if (rt.rec.state == instance_state::creating ||
            rt.rec.state == instance_state::undeployed)
            ++outstanding;
    }
    int parked = 1;  // this invocation
    for (const auto& [rid, pfn] : deferred_)
        if (pfn == fn) ++parked;

    routing_decision d = route_sfepas(candidates_for(fn), outstanding >= parked);
    if (d.action == routing_action::assign) {
        assign_invocation(req, fn, d.instance_id);
        return;
    }
    if (d.action == routing_action::create_and_defer)
        create_demand_instance(fn, std::nullopt);
    defer_invocation(req, fn);
}

void simulation::route_icps_mncpas(int req, int fn) {
    const auto& spec = fn_spec(fn);
    auto bound = bindings_.find(req);
    const bool is_bound = bound != bindings_.end();
    const int node_id = choose_mncpas_node(
        nodes_, is_bound ? std::optional<int>(bound->second) : std::nullopt);

    const int idle = idle_instance_of(fn, node_id);
    int target = -1;
    if (idle >= 1) {
        target = idle;
    } else if (can_host(node(node_id), spec.memory_mb)) {
        target = create_demand_instance(fn, node_id);
    } else if (!is_bound && cfg_.allow_new_nodes &&
               spec.memory_mb <= cfg_.node_memory_mb) {
        target = create_demand_instance(fn, add_node());
    } else {
        defer_invocation(req, fn);
        return;
    }
    assign_invocation(req, fn, target);

    if (is_bound) return;
    const int chosen = *inst(target).rec.node;
    const workflow_type& type = type_of(req);
    const request_state& st = req_state(req);

    // eagerly pre-warm the successors along this request's own path
    for (int s : type.member_successors(fn)) {
        if (fn_spec(s).is_virtual()) continue;
        if (st.inv.at(s).phase == inv_phase::done) continue;
        bool on_node = false;
        for (int id : fn_instances_[s]) {
            const instance_rt& rt = inst(id);
            if (rt.cancelled || rt.rec.state == instance_state::killed) continue;
            if (rt.rec.node && *rt.rec.node == chosen &&
                (rt.rec.state == instance_state::paused ||
                 rt.rec.state == instance_state::creating) &&
                rt.queue.empty()) {
                on_node = true;
                break;
            }
        }
        if (on_node) continue;
        const auto& sspec = fn_spec(s);
        if (!can_host(node(chosen), sspec.memory_mb)) continue;

        instance_rt rt;
        rt.rec.id = static_cast<int>(instances_.size()) + 1;
        rt.rec.function = s;
        rt.rec.memory_mb = sspec.memory_mb;
        rt.demand = false;
        instances_.push_back(rt);
        fn_instances_[s].push_back(rt.rec.id);
        deploy_on(rt.rec.id, chosen);
    }

    // bind when the node cannot hold the rest of the workflow
    mem_mb needed = 0;
    for (int m : type.members) {
        if (fn_spec(m).is_virtual() || m == fn) continue;
        if (st.inv.at(m).phase == inv_phase::done) continue;
        bool on_node = false;
        for (int id : fn_instances_[m]) {
            const instance_rt& rt = inst(id);
            if (rt.cancelled || rt.rec.state == instance_state::killed) continue;
            if (rt.rec.node && *rt.rec.node == chosen) {
                on_node = true;
                break;
            }
        }
        if (!on_node) needed += fn_spec(m).memory_mb;
    }
    if (needed > node(chosen).free_mb()) bindings_[req] = chosen;
}

void simulation::assign_invocation(int req, int fn, int instance_id) {
    invocation_state& iv = req_state(req).inv.at(fn);
    iv.phase = inv_phase::assigned;
    iv.instance = instance_id;
    instance_rt& rt = inst(instance_id);
    rt.queue.emplace_back(req, fn);
    if (rt.rec.node && !iv.data_computed) compute_data_transfers(req, fn);
    try_start(instance_id);
}

void simulation::defer_invocation(int req, int fn) {
    invocation_state& iv = req_state(req).inv.at(fn);
    iv.phase = inv_phase::deferred;
    if (!iv.defer_logged) {
        iv.defer_logged = true;
        log_record r = base_record(log_kind::routing_deferred);
        r.request = req;
        r.function = fn;
        log_.append(r);
    }
    deferred_.emplace_back(req, fn);
}

void simulation::wake_deferred() {
    if (deferred_.empty()) return;
    std::vector<std::pair<int, int>> work = std::move(deferred_);
    deferred_.clear();
    for (auto [req, fn] : work) route_invocation(req, fn);
}

// ---------------------------------------------------------------------------
// lifecycle plumbing

void simulation::compute_data_transfers(int req, int fn) {
    invocation_state& iv = req_state(req).inv.at(fn);
    iv.data_computed = true;
    const int dst = *inst(iv.instance).rec.node;
    for (auto [pred_fn, pred_node] : iv.pred_nodes) {
        if (pred_node < 0) continue;  // virtual producer, no transfer
        const time_ms lat = transfer_latency(cfg_.network, pred_node, dst);
        if (lat <= 0) continue;
        ++iv.pending_data;
        event ev;
        ev.time = clock_ + lat;
        ev.kind = event_kind::data_arrival;
        ev.request = req;
        ev.function = fn;
        ev.latency_ms = lat;
        schedule(ev);
    }
}

void simulation::try_start(int instance_id) {
    instance_rt& rt = inst(instance_id);
    if (rt.rec.state != instance_state::paused || rt.queue.empty()) return;
    auto [req, fn] = rt.queue.front();
    invocation_state& iv = req_state(req).inv.at(fn);
    if (iv.pending_data > 0) return;  // inputs still in flight
    rt.queue.pop_front();

    rt.rec = transition(rt.rec, lifecycle_trigger::invoke, clock_);
    iv.phase = inv_phase::running;
    log_record r = base_record(log_kind::function_start);
    r.request = req;
    r.function = fn;
    r.instance = instance_id;
    r.node = *rt.rec.node;
    log_.append(r);

    rt.busy_until = clock_ + fn_spec(fn).exec_time_ms;
    event ev;
    ev.time = rt.busy_until;
    ev.kind = event_kind::function_complete;
    ev.request = req;
    ev.function = fn;
    ev.instance = instance_id;
    schedule(ev);
}

void simulation::enter_paused(int instance_id, time_ms keep_alive) {
    instance_rt& rt = inst(instance_id);
    ++rt.pause_epoch;
    event ev;
    ev.time = clock_ + keep_alive;
    ev.kind = event_kind::keep_alive_expire;
    ev.instance = instance_id;
    ev.epoch = rt.pause_epoch;
    schedule(ev);
}

void simulation::expire_instance(int instance_id) {
    instance_rt& rt = inst(instance_id);
    rt.rec = transition(rt.rec, lifecycle_trigger::expire, clock_);
    worker_node& n = node(*rt.rec.node);
    n.used_mb -= rt.rec.memory_mb;
    n.resident.erase(instance_id);
}

void simulation::complete_function(int req, int fn, int node,
                                   std::vector<std::pair<int, int>>& routable) {
    request_state& st = req_state(req);
    invocation_state& iv = st.inv.at(fn);
    iv.phase = inv_phase::done;
    --st.remaining;
    if (st.remaining == 0) {
        finish_request(req);
        return;
    }
    const workflow_type& type = types_[st.type_index];
    for (int s : type.member_successors(fn)) {
        invocation_state& siv = st.inv.at(s);
        siv.pred_nodes.emplace_back(fn, node);
        if (--siv.remaining_preds > 0) continue;
        if (fn_spec(s).is_virtual()) {
            log_record r = base_record(log_kind::function_complete);
            r.request = req;
            r.function = s;
            log_.append(r);
            complete_function(req, s, -1, routable);
        } else {
            routable.emplace_back(req, s);
        }
    }
}

void simulation::finish_request(int req) {
    request_state& st = req_state(req);
    st.end = clock_;
    --incomplete_requests_;
    bindings_.erase(req);
    log_record r = base_record(log_kind::request_complete);
    r.request = req;
    log_.append(r);
}

// ---------------------------------------------------------------------------
// helpers

std::int64_t simulation::alive_count(int fn) const {
    std::int64_t n = 0;
    for (int id : fn_instances_[fn]) {
        const instance_rt& rt = inst(id);
        if (rt.cancelled || rt.rec.state == instance_state::killed) continue;
        ++n;
    }
    return n;
}

std::set<int> simulation::predecessor_nodes(int fn) const {
    std::set<int> out;
    for (int p : app_->real_predecessors(fn)) {
        for (int id : fn_instances_[p]) {
            const instance_rt& rt = inst(id);
            if (rt.cancelled || rt.rec.state == instance_state::killed) continue;
            if (rt.rec.node) out.insert(*rt.rec.node);
        }
    }
    return out;
}

system_snapshot simulation::snapshot() const {
    system_snapshot snap;
    snap.clock = clock_;
    snap.nodes = nodes_;
    for (const auto& rt : instances_) {
        if (!rt.cancelled) snap.instances.push_back(rt.rec);
    }
    snap.pending_invocations = static_cast<int>(deferred_.size());
    return snap;
}

void simulation::check_memory_invariants() const {
    for (const auto& n : nodes_) {
        if (n.used_mb < 0 || n.used_mb > n.capacity_mb)
            throw std::logic_error("node memory bound violated on node " +
                                   std::to_string(n.id));
        mem_mb sum = 0;
        for (int id : n.resident) sum += inst(id).rec.memory_mb;
        if (sum != n.used_mb)
            throw std::logic_error("resident set out of sync on node " +
                                   std::to_string(n.id));
    }
}

}  // namespace icps
