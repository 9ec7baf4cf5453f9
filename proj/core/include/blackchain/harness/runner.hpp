#pragma once

#include "blackchain/harness/simulation.hpp"

namespace blackchain::harness {

struct RunOutcome {
    bool ok = false;
    std::string error;
    RunMetrics metrics;
    std::string chain_path;
    std::string genesis_path;
};

// Runs one scenario and writes artifacts into cfg.out_dir: chain.bin,
// genesis.cfg, metrics.csv, events.log and one audit_region<r>.csv per
// SCMS region. Deterministic under a fixed seed.
RunOutcome run_scenario(const ScenarioConfig& cfg);

enum class AuditStatus : int {
    verified = 0,
    invalid = 1,
    parse_error = 2,
};

struct AuditOutcome {
    AuditStatus status = AuditStatus::parse_error;
    ledger::AuditVerdict verdict;
    std::string message;
};

// Parses and fully re-verifies a persisted chain against a genesis file.
AuditOutcome audit_chain_file(const std::string& chain_path, const std::string& genesis_path);
AuditOutcome audit_chain_bytes(const std::vector<std::uint8_t>& bytes,
                               const ledger::GenesisConfig& genesis);

struct SweepOutcome {
    bool ok = false;
    std::string error;
    std::size_t rows = 0;
};

// Grid file: `key = v1, v2, ...` lines over scenario keys; runs the cross
// product of all combinations and writes one metrics row per combination.
SweepOutcome run_sweep(const ScenarioConfig& base, const std::string& grid_text,
                       std::ostream& csv_out);

} // namespace blackchain::harness
