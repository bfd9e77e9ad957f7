#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "icps/experiment.hpp"

using namespace icps;

int main(int argc, char** argv) {
    CLI::App app{"serverless workflow scheduling simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    long long seed_override = -1;
    std::string rpd_conv = "literal";
    std::vector<std::string> compare_paths;

    CLI::App* run_cmd = app.add_subcommand("run", "run a single experiment");
    run_cmd->add_option("config", config_path, "experiment INI file")->required();
    run_cmd->add_option("--out", out_dir, "output directory override");
    run_cmd->add_option("--seed", seed_override, "seed override");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter grid");
    sweep_cmd->add_option("config", config_path, "sweep INI file")->required();
    sweep_cmd->add_option("--out", out_dir, "output directory override");
    sweep_cmd->add_option("--seed", seed_override, "seed override");

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "RPD table across result CSVs");
    compare_cmd->add_option("csvs", compare_paths, "sweep CSVs to compare")
        ->required()
        ->expected(-1);
    compare_cmd->add_option("--out", out_dir, "output directory override");
    compare_cmd->add_option("--rpd-convention", rpd_conv, "literal|positive")
        ->check(CLI::IsMember({"literal", "positive"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            ini_file ini = ini_file::parse_file(config_path);
            experiment_config cfg = parse_experiment_config(ini);
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            if (seed_override >= 0) cfg.sim.seed = static_cast<std::uint64_t>(seed_override);
            auto reports = run_experiment(cfg);
            for (size_t rep = 0; rep < reports.size(); ++rep) {
                const auto& r = reports[rep];
                std::printf("rep %zu: phi_resp=%.6f phi_resource=%.6f eta=%.6f "
                            "cold_starts=%d transfer=%lldms\n",
                            rep, r.phi_resp, r.phi_resource, r.eta, r.cold_start_count,
                            static_cast<long long>(r.transfer_latency_ms));
            }
            std::printf("wrote %s/results.csv\n", cfg.out_dir.c_str());
        } else if (sweep_cmd->parsed()) {
            ini_file ini = ini_file::parse_file(config_path);
            if (seed_override >= 0)
                ini.sections["sim"]["seed"] = std::to_string(seed_override);
            sweep_grid grid = parse_sweep_grid(ini);
            sweep_result result = sweep(grid);
            std::string dir = out_dir;
            if (dir.empty())
                dir = grid.combos.empty() ? "out" : grid.combos.front().out_dir;
            std::filesystem::create_directories(dir);
            std::ofstream csv(dir + "/sweep.csv");
            csv << result.to_csv();
            std::printf("%zu combinations, %zu rows -> %s/sweep.csv\n",
                        grid.combos.size(), result.rows.size(), dir.c_str());
        } else if (compare_cmd->parsed()) {
            const rpd_convention conv = rpd_conv == "positive"
                                            ? rpd_convention::positive
                                            : rpd_convention::literal;
            compare_result table = compare_csvs(compare_paths, conv);
            if (out_dir.empty()) {
                std::cout << table.to_csv();
            } else {
                std::filesystem::create_directories(out_dir);
                std::ofstream csv(out_dir + "/rpd.csv");
                csv << table.to_csv();
                std::printf("wrote %s/rpd.csv\n", out_dir.c_str());
            }
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
