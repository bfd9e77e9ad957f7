#include "icps/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace icps {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        std::int64_t v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error(key, "expected integer, got '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error(key, "expected number, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw config_error(key, "expected boolean, got '" + value + "'");
}

}  // namespace

ini_file ini_file::parse(std::istream& in) {
    ini_file out;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::runtime_error("ini line " + std::to_string(line_no) +
                                         ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            out.sections[section];
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("ini line " + std::to_string(line_no) +
                                     ": expected key = value");
        out.sections[section][trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return out;
}

ini_file ini_file::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse(in);
}

bool ini_file::has(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) > 0;
}

std::string ini_file::get(const std::string& section, const std::string& key,
                          const std::string& fallback) const {
    auto s = sections.find(section);
    if (s == sections.end()) return fallback;
    auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

namespace {

const std::map<std::string, std::vector<std::string>> kKnownKeys = {
    {"sim",
     {"duration_ms", "interval_ms", "keep_alive_ms", "network_delay_ms",
      "node_count", "node_memory_mb", "seed", "allow_new_nodes",
      "check_invariants"}},
    {"policy",
     {"mode", "prediction", "predictor", "placement", "routing", "pool_size",
      "chscg_window", "lstm_hidden", "lstm_series_length", "lstm_learning_rate",
      "lstm_batch_size", "lstm_epochs", "predictor_url"}},
    {"workload",
     {"source", "trace_path", "concurrency", "depth", "branch_factor",
      "type_count", "window_ms", "exec_min_ms", "exec_max_ms", "memory_min_mb",
      "memory_max_mb", "cold_start_ms"}},
    {"output", {"dir", "repetitions", "rpd_convention"}},
};

// keys whose comma-separated values define sweep axes
const std::vector<std::pair<std::string, std::string>> kSweepable = {
    {"sim", "network_delay_ms"}, {"sim", "node_count"},
    {"sim", "node_memory_mb"},   {"sim", "keep_alive_ms"},
    {"sim", "interval_ms"},      {"policy", "mode"},
    {"policy", "prediction"},    {"policy", "predictor"},
    {"policy", "placement"},     {"policy", "routing"},
    {"policy", "pool_size"},     {"workload", "concurrency"},
    {"workload", "depth"},       {"workload", "branch_factor"},
    {"workload", "type_count"},
};

void reject_unknown_keys(const ini_file& ini) {
    for (const auto& [section, keys] : ini.sections) {
        auto known = kKnownKeys.find(section);
        if (known == kKnownKeys.end())
            throw config_error(section, "unknown section");
        for (const auto& [key, value] : keys) {
            (void)value;
            if (std::find(known->second.begin(), known->second.end(), key) ==
                known->second.end())
                throw config_error(key, "unknown key in section [" + section + "]");
        }
    }
}

struct single_parser {
    const ini_file& ini;

    std::string str(const std::string& section, const std::string& key,
                    const std::string& fallback) const {
        std::string v = ini.get(section, key, fallback);
        if (v.find(',') != std::string::npos)
            throw config_error(key, "list value only allowed in sweep mode");
        return v;
    }
    std::int64_t num(const std::string& section, const std::string& key,
                     std::int64_t fallback) const {
        std::string v = str(section, key, std::to_string(fallback));
        return parse_int(key, v);
    }
};

}  // namespace

experiment_config parse_experiment_config(const ini_file& ini) {
    reject_unknown_keys(ini);
    single_parser p{ini};
    experiment_config cfg;

    cfg.sim.duration_ms = p.num("sim", "duration_ms", cfg.sim.duration_ms);
    cfg.sim.keep_alive_ms = p.num("sim", "keep_alive_ms", cfg.sim.keep_alive_ms);
    cfg.sim.network.delay_ms = p.num("sim", "network_delay_ms", cfg.sim.network.delay_ms);
    cfg.sim.node_count = static_cast<int>(p.num("sim", "node_count", cfg.sim.node_count));
    cfg.sim.node_memory_mb = p.num("sim", "node_memory_mb", cfg.sim.node_memory_mb);
    cfg.sim.seed = static_cast<std::uint64_t>(p.num("sim", "seed", cfg.sim.seed));
    cfg.sim.allow_new_nodes =
        parse_bool("allow_new_nodes",
                   p.str("sim", "allow_new_nodes", cfg.sim.allow_new_nodes ? "true" : "false"));
    cfg.sim.check_invariants =
        parse_bool("check_invariants",
                   p.str("sim", "check_invariants", cfg.sim.check_invariants ? "true" : "false"));

    const std::string mode = p.str("policy", "mode", "icps");
    if (mode == "icps") cfg.policy.mode = baseline_mode::icps;
    else if (mode == "keep_alive") cfg.policy.mode = baseline_mode::keep_alive;
    else if (mode == "pool") cfg.policy.mode = baseline_mode::pool;
    else throw config_error("mode", "unknown mode '" + mode + "'");

    const std::string prediction = p.str("policy", "prediction", "bpcg");
    if (prediction == "fpcg") cfg.policy.prediction = prediction_strategy::fpcg;
    else if (prediction == "bpcg") cfg.policy.prediction = prediction_strategy::bpcg;
    else if (prediction == "chscg") cfg.policy.prediction = prediction_strategy::chscg;
    else if (prediction == "none") cfg.policy.prediction = prediction_strategy::none;
    else throw config_error("prediction", "unknown strategy '" + prediction + "'");

    const std::string predictor = p.str("policy", "predictor", "naive");
    if (predictor == "naive") cfg.policy.predictor = predictor_kind::naive;
    else if (predictor == "lstm") cfg.policy.predictor = predictor_kind::lstm;
    else if (predictor == "http") cfg.policy.predictor = predictor_kind::http;
    else throw config_error("predictor", "unknown predictor '" + predictor + "'");

    // baselines default to spread placement; the main scheduler to affinity
    const std::string default_placement =
        cfg.policy.mode == baseline_mode::icps ? "ads" : "dlbds";
    const std::string placement = p.str("policy", "placement", default_placement);
    if (placement == "dlbds") cfg.policy.placement = placement_strategy::dlbds;
    else if (placement == "ads") cfg.policy.placement = placement_strategy::ads;
    else if (placement == "fdds") cfg.policy.placement = placement_strategy::fdds;
    else throw config_error("placement", "unknown strategy '" + placement + "'");

    const std::string routing = p.str("policy", "routing", "sfepas");
    if (routing == "swpas") cfg.policy.routing = routing_strategy::swpas;
    else if (routing == "sfepas") cfg.policy.routing = routing_strategy::sfepas;
    else if (routing == "mncpas") cfg.policy.routing = routing_strategy::mncpas;
    else throw config_error("routing", "unknown strategy '" + routing + "'");

    cfg.policy.pool_size = static_cast<int>(p.num("policy", "pool_size", cfg.policy.pool_size));
    if (cfg.policy.pool_size < 0) throw config_error("pool_size", "must be >= 0");
    cfg.policy.chscg_window =
        static_cast<int>(p.num("policy", "chscg_window", cfg.policy.chscg_window));
    cfg.policy.lstm.hidden = static_cast<int>(p.num("policy", "lstm_hidden", 64));
    cfg.policy.lstm.series_length =
        static_cast<int>(p.num("policy", "lstm_series_length", 36));
    cfg.policy.lstm.learning_rate =
        parse_double("lstm_learning_rate",
                     p.str("policy", "lstm_learning_rate", "0.001"));
    cfg.policy.lstm.batch_size = static_cast<int>(p.num("policy", "lstm_batch_size", 32));
    cfg.policy.lstm.epochs = static_cast<int>(p.num("policy", "lstm_epochs", 1000));
    cfg.policy.predictor_url = p.str("policy", "predictor_url", "");
    if (cfg.policy.predictor == predictor_kind::http && cfg.policy.predictor_url.empty())
        throw config_error("predictor_url", "required when predictor = http");

    // the 10-minute step applies when the LSTM forecaster is in use
    const std::int64_t default_interval =
        cfg.policy.predictor == predictor_kind::lstm ? 600000 : 60000;
    cfg.sim.interval_ms = p.num("sim", "interval_ms", default_interval);

    const std::string source = p.str("workload", "source", "synthetic");
    if (source == "trace") {
        trace_source src;
        src.path = p.str("workload", "trace_path", "");
        if (src.path.empty()) throw config_error("trace_path", "required for trace source");
        cfg.workload_source = src;
    } else if (source == "synthetic") {
        synthetic_params sp;
        sp.concurrency = static_cast<int>(p.num("workload", "concurrency", sp.concurrency));
        sp.depth = static_cast<int>(p.num("workload", "depth", sp.depth));
        sp.branch_factor =
            static_cast<int>(p.num("workload", "branch_factor", sp.branch_factor));
        sp.type_count = static_cast<int>(p.num("workload", "type_count", sp.type_count));
        sp.window_ms = p.num("workload", "window_ms", cfg.sim.duration_ms);
        sp.exec_min_ms = p.num("workload", "exec_min_ms", sp.exec_min_ms);
        sp.exec_max_ms = p.num("workload", "exec_max_ms", sp.exec_max_ms);
        sp.memory_min_mb = p.num("workload", "memory_min_mb", sp.memory_min_mb);
        sp.memory_max_mb = p.num("workload", "memory_max_mb", sp.memory_max_mb);
        sp.cold_start_ms = p.num("workload", "cold_start_ms", sp.cold_start_ms);
        cfg.workload_source = sp;
    } else {
        throw config_error("source", "unknown workload source '" + source + "'");
    }

    cfg.out_dir = p.str("output", "dir", cfg.out_dir);
    cfg.repetitions = static_cast<int>(p.num("output", "repetitions", cfg.repetitions));
    if (cfg.repetitions < 1) throw config_error("repetitions", "must be >= 1");
    const std::string conv = p.str("output", "rpd_convention", "literal");
    if (conv == "literal") cfg.rpd = rpd_convention::literal;
    else if (conv == "positive") cfg.rpd = rpd_convention::positive;
    else throw config_error("rpd_convention", "must be literal or positive");

    return cfg;
}

sweep_grid parse_sweep_grid(const ini_file& ini) {
    reject_unknown_keys(ini);
    sweep_grid grid;
    for (const auto& [section, key] : kSweepable) {
        if (!ini.has(section, key)) continue;
        std::vector<std::string> values = split_list(ini.get(section, key, ""));
        if (values.size() > 1) grid.axes.push_back({section, key, values});
    }

    std::vector<size_t> index(grid.axes.size(), 0);
    while (true) {
        ini_file combo = ini;
        std::vector<std::string> values;
        for (size_t a = 0; a < grid.axes.size(); ++a) {
            combo.sections[grid.axes[a].section][grid.axes[a].key] =
                grid.axes[a].values[index[a]];
            values.push_back(grid.axes[a].values[index[a]]);
        }
        grid.combos.push_back(parse_experiment_config(combo));
        grid.combo_values.push_back(std::move(values));

        size_t a = 0;
        for (; a < index.size(); ++a) {
            if (++index[a] < grid.axes[a].values.size()) break;
            index[a] = 0;
        }
        if (a == index.size()) break;
    }
    return grid;
}

workload build_workload(const experiment_config& cfg, std::uint64_t seed) {
    if (std::holds_alternative<trace_source>(cfg.workload_source))
        return load_trace_file(std::get<trace_source>(cfg.workload_source).path);
    synthetic_params sp = std::get<synthetic_params>(cfg.workload_source);
    sp.seed = seed;
    return generate_synthetic(sp);
}

}  // namespace icps
