#include "icps/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "icps/engine.hpp"

namespace icps {

run_result run_single(const experiment_config& cfg, std::uint64_t seed, bool keep_log) {
    workload wl = build_workload(cfg, seed);
    sim_config sim = cfg.sim;
    sim.seed = seed;
    simulation engine(sim, wl.app, wl.types, wl.requests, cfg.policy);
    const event_log& log = engine.run();

    run_result out;
    out.report = compute_report(log, wl.app, wl.types);
    if (keep_log) {
        std::ostringstream os;
        log.to_ndjson(os);
        out.log_ndjson = os.str();
    }
    return out;
}

std::vector<metrics_report> run_experiment(const experiment_config& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<metrics_report> reports;
    std::ofstream csv(cfg.out_dir + "/results.csv");
    csv << "rep,seed," << report_csv_header() << '\n';
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        const std::uint64_t seed = cfg.sim.seed + static_cast<std::uint64_t>(rep);
        run_result rr = run_single(cfg, seed, rep == 0);
        if (rep == 0) {
            std::ofstream lf(cfg.out_dir + "/events_rep0.ndjson");
            lf << rr.log_ndjson;
        }
        std::ofstream jf(cfg.out_dir + "/report_rep" + std::to_string(rep) + ".json");
        report_to_json(rr.report, jf);
        csv << rep << ',' << seed << ',' << report_csv_row(rr.report) << '\n';
        reports.push_back(rr.report);
    }
    return reports;
}

namespace {

int sweep_thread_cap() {
    if (const char* env = std::getenv("ICPS_SIM_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<std::string> metric_columns() {
    std::vector<std::string> cols;
    std::stringstream ss(report_csv_header());
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    return cols;
}

}  // namespace

std::string sweep_result::to_csv() const {
    std::ostringstream os;
    for (size_t i = 0; i < header.size(); ++i)
        os << header[i] << (i + 1 < header.size() ? ',' : '\n');
    for (const auto& row : rows)
        for (size_t i = 0; i < row.size(); ++i)
            os << row[i] << (i + 1 < row.size() ? ',' : '\n');
    return os.str();
}

sweep_result sweep(const sweep_grid& grid) {
    sweep_result out;
    for (const auto& axis : grid.axes) out.header.push_back(axis.key);
    out.header.push_back("rep");
    out.header.push_back("seed");
    for (const auto& col : metric_columns()) out.header.push_back(col);

    struct job { size_t combo; int rep; };
    std::vector<job> jobs;
    for (size_t c = 0; c < grid.combos.size(); ++c)
        for (int rep = 0; rep < grid.combos[c].repetitions; ++rep)
            jobs.push_back({c, rep});

    std::vector<std::vector<std::string>> rows(jobs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t k = next.fetch_add(1); k < jobs.size(); k = next.fetch_add(1)) {
            const auto& [combo, rep] = jobs[k];
            const experiment_config& cfg = grid.combos[combo];
            const std::uint64_t seed = cfg.sim.seed + static_cast<std::uint64_t>(rep);
            run_result rr = run_single(cfg, seed, false);
            std::vector<std::string> row = grid.combo_values[combo];
            row.push_back(std::to_string(rep));
            row.push_back(std::to_string(seed));
            std::stringstream ss(report_csv_row(rr.report));
            std::string cell;
            while (std::getline(ss, cell, ',')) row.push_back(cell);
            rows[k] = std::move(row);
        }
    };
    const int threads = std::min<int>(sweep_thread_cap(), static_cast<int>(jobs.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    out.rows = std::move(rows);
    return out;
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(cell);
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<std::vector<std::string>> read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open csv: " + path);
    return read_csv(in);
}

std::string compare_result::to_csv() const {
    std::ostringstream os;
    for (size_t i = 0; i < header.size(); ++i)
        os << header[i] << (i + 1 < header.size() ? ',' : '\n');
    for (const auto& row : rows)
        for (size_t i = 0; i < row.size(); ++i)
            os << row[i] << (i + 1 < row.size() ? ',' : '\n');
    return os.str();
}

compare_result compare_csvs(const std::vector<std::string>& paths, rpd_convention conv) {
    if (paths.empty()) throw schema_mismatch("no inputs");

    struct input {
        std::string label;
        std::vector<std::string> grid_cols;
        // grid key -> mean eta over repetitions
        std::map<std::vector<std::string>, std::pair<double, int>> eta;
    };
    const std::set<std::string> non_grid = {"rep", "seed"};
    std::vector<std::string> metric_cols = metric_columns();
    const std::set<std::string> metrics(metric_cols.begin(), metric_cols.end());

    std::vector<input> inputs;
    for (const auto& path : paths) {
        auto rows = read_csv_file(path);
        if (rows.size() < 2) throw schema_mismatch(path + ": no data rows");
        const auto& header = rows[0];
        input in;
        in.label = std::filesystem::path(path).stem().string();
        int eta_col = -1;
        std::vector<int> grid_idx;
        for (size_t c = 0; c < header.size(); ++c) {
            if (header[c] == "eta") eta_col = static_cast<int>(c);
            if (!metrics.count(header[c]) && !non_grid.count(header[c])) {
                in.grid_cols.push_back(header[c]);
                grid_idx.push_back(static_cast<int>(c));
            }
        }
        if (eta_col < 0) throw schema_mismatch(path + ": missing eta column");
        for (size_t r = 1; r < rows.size(); ++r) {
            if (rows[r].size() != header.size())
                throw schema_mismatch(path + ": ragged row");
            std::vector<std::string> key;
            for (int c : grid_idx) key.push_back(rows[r][c]);
            auto& [sum, count] = in.eta[key];
            sum += std::stod(rows[r][eta_col]);
            count += 1;
        }
        inputs.push_back(std::move(in));
    }

    for (size_t i = 1; i < inputs.size(); ++i) {
        if (inputs[i].grid_cols != inputs[0].grid_cols)
            throw schema_mismatch("grid columns differ between inputs");
        if (inputs[i].eta.size() != inputs[0].eta.size())
            throw schema_mismatch("grid points differ between inputs");
        for (const auto& [key, v] : inputs[0].eta) {
            (void)v;
            if (!inputs[i].eta.count(key))
                throw schema_mismatch("grid point missing from " + inputs[i].label);
        }
    }

    compare_result out;
    out.header = inputs[0].grid_cols;
    out.header.push_back("eta_best");
    for (const auto& in : inputs) {
        out.header.push_back("eta_" + in.label);
        out.header.push_back("rpd_" + in.label);
    }
    for (const auto& [key, v0] : inputs[0].eta) {
        (void)v0;
        std::vector<double> etas;
        for (const auto& in : inputs) {
            const auto& [sum, count] = in.eta.at(key);
            etas.push_back(sum / count);
        }
        const double best = *std::min_element(etas.begin(), etas.end());
        std::vector<std::string> row = key;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g", best);
        row.push_back(buf);
        for (double e : etas) {
            std::snprintf(buf, sizeof(buf), "%.12g", e);
            row.push_back(buf);
            std::snprintf(buf, sizeof(buf), "%.12g", rpd(best, e, conv));
            row.push_back(buf);
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

}  // namespace icps
