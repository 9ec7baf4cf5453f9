#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "blackchain/adversary/adversary.hpp"
#include "blackchain/ledger/chain.hpp"

namespace blackchain::harness {

// Scenario configuration. File format is one `key = value` per line with
// `#` comments; `rsu` and `attack` may repeat. Any scalar key may be
// overridden by an environment variable BLACKCHAIN_<KEY> (uppercased), and
// unknown keys are rejected with a diagnostic naming the key.
struct ScenarioConfig {
    std::uint64_t seed = 1;
    sim::Tick ticks = 1000;
    std::uint32_t vehicles = 20;
    double world_m = 2000.0;
    double radio_range_m = 500.0;
    bool allow_radio_range_override = false;
    double v_max_mps = 70.0;
    double detect_tol = 0.1;
    double jump_slack_m = 5.0;
    sim::Tick pseudonym_window_ticks = 600;
    sim::Tick pseudonym_overlap_ticks = 100;
    sim::Tick cluster_epoch_ticks = 10;
    sim::Tick recluster_interval_ticks = 50;
    double rsu_cell_m = 2000.0;
    std::uint32_t pow_difficulty_bits = 8;
    std::uint32_t regions = 2;
    sim::Tick rsu_link_delay_ticks = 1;
    sim::Tick bft_round_ticks = 10; // round slot length = round timeout
    sim::Tick ma_mine_interval_ticks = 5;
    bool heartbeat_mining = false;
    std::vector<sim::Position> rsu_positions;
    std::vector<adversary::AttackProfile> attacks;
    std::string out_dir = "out";
};

struct ConfigError {
    std::string key;
    std::string message;
};

struct ConfigResult {
    std::optional<ScenarioConfig> config;
    std::vector<ConfigError> errors;
    bool ok() const { return config.has_value(); }
};

// Parse + env overrides + validation.
ConfigResult parse_scenario_text(const std::string& text);
ConfigResult load_scenario_file(const std::string& path);
std::vector<ConfigError> validate_scenario(const ScenarioConfig& cfg);

// Applies `key = value` to a config; used by sweep grids. Unknown keys or
// bad values come back as errors.
std::optional<ConfigError> apply_scenario_key(ScenarioConfig& cfg, const std::string& key,
                                              const std::string& value);

bool is_scenario_key(const std::string& key);

// Genesis exchange file for the offline auditor: difficulty, detection
// parameters, genesis participants, PCA anchors and the RSU registry.
void write_genesis_file(std::ostream& os, const ledger::GenesisConfig& g);

struct GenesisParseResult {
    std::optional<ledger::GenesisConfig> genesis;
    std::string error;
    bool ok() const { return genesis.has_value(); }
};
GenesisParseResult parse_genesis_text(const std::string& text);
GenesisParseResult load_genesis_file(const std::string& path);

} // namespace blackchain::harness
