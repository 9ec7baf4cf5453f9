// blackchain: scenario runner, chain auditor and sweep driver.
//
//   blackchain run --config scenario.cfg [--seed N] [--out DIR]
//   blackchain audit chain.bin --genesis genesis.cfg
//   blackchain sweep --config scenario.cfg --grid grid.cfg --out metrics.csv

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "blackchain/harness/runner.hpp"

using namespace blackchain;

namespace {

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<std::string> out_dir) {
    auto loaded = harness::load_scenario_file(config_path);
    if (!loaded.ok()) {
        for (const auto& e : loaded.errors)
            std::cerr << "config error: " << e.key << ": " << e.message << "\n";
        return 1;
    }
    harness::ScenarioConfig cfg = *loaded.config;
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.out_dir = *out_dir;

    auto outcome = harness::run_scenario(cfg);
    if (!outcome.ok) {
        std::cerr << "run failed: " << outcome.error << "\n";
        return 1;
    }
    std::cout << harness::RunMetrics::csv_header() << "\n" << outcome.metrics.csv_row() << "\n";
    std::cout << "chain: " << outcome.chain_path << "\n";
    std::cout << "genesis: " << outcome.genesis_path << "\n";
    return 0;
}

int cmd_audit(const std::string& chain_path, const std::string& genesis_path) {
    auto outcome = harness::audit_chain_file(chain_path, genesis_path);
    std::cout << outcome.message << "\n";
    return static_cast<int>(outcome.status);
}

int cmd_sweep(const std::string& config_path, const std::string& grid_path,
              const std::string& out_csv) {
    auto loaded = harness::load_scenario_file(config_path);
    if (!loaded.ok()) {
        for (const auto& e : loaded.errors)
            std::cerr << "config error: " << e.key << ": " << e.message << "\n";
        return 1;
    }
    std::ifstream grid(grid_path);
    if (!grid) {
        std::cerr << "cannot open grid file " << grid_path << "\n";
        return 1;
    }
    std::stringstream grid_text;
    grid_text << grid.rdbuf();

    std::ofstream csv(out_csv);
    if (!csv) {
        std::cerr << "cannot open output csv " << out_csv << "\n";
        return 1;
    }
    auto outcome = harness::run_sweep(*loaded.config, grid_text.str(), csv);
    if (!outcome.ok) {
        std::cerr << "sweep failed: " << outcome.error << "\n";
        return 1;
    }
    std::cout << outcome.rows << " rows written to " << out_csv << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical accountable misbehavior reporting and revocation simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir, chain_path, genesis_path, grid_path, out_csv;
    std::uint64_t seed = 0;

    auto* run = app.add_subcommand("run", "Run one scenario and write artifacts");
    run->add_option("--config", config_path, "scenario config file")->required();
    auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
    auto* out_opt = run->add_option("--out", out_dir, "override the output directory");

    auto* audit = app.add_subcommand("audit", "Verify a persisted chain file");
    audit->add_option("chainfile", chain_path, "chain file to audit")->required();
    audit->add_option("--genesis", genesis_path, "genesis config file")->required();

    auto* sweep = app.add_subcommand("sweep", "Run a parameter grid, one metrics row per combo");
    sweep->add_option("--config", config_path, "base scenario config file")->required();
    sweep->add_option("--grid", grid_path, "grid file: key = v1,v2,...")->required();
    sweep->add_option("--out", out_csv, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        return cmd_run(config_path,
                       seed_opt->count() ? std::optional<std::uint64_t>(seed) : std::nullopt,
                       out_opt->count() ? std::optional<std::string>(out_dir) : std::nullopt);
    }
    if (audit->parsed()) return cmd_audit(chain_path, genesis_path);
    if (sweep->parsed()) return cmd_sweep(config_path, grid_path, out_csv);
    return 1;
}
