#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blackchain/sim/clock.hpp"

namespace blackchain::harness {

struct AttackerOutcome {
    std::uint32_t vehicle_index = 0;
    std::optional<sim::Tick> first_false_beacon;
    std::optional<sim::Tick> revocation_tx_committed; // first adoption anywhere
    std::optional<sim::Tick> blacklisted_all_regions;

    std::optional<sim::Tick> revocation_latency() const {
        if (!first_false_beacon || !blacklisted_all_regions) return std::nullopt;
        return *blacklisted_all_regions - *first_false_beacon;
    }
};

struct RunMetrics {
    std::uint64_t seed = 0;
    sim::Tick ticks = 0;

    std::vector<AttackerOutcome> attackers;
    std::uint64_t false_revocations = 0; // blacklisted lt_ids outside ground truth

    std::uint64_t detections_fired = 0; // trust statements produced by any vehicle
    std::uint64_t reports_generated = 0;
    std::uint64_t reports_committed = 0;  // distinct reports in committed cluster blocks
    std::uint64_t reports_aggregated = 0; // distinct reports in committed statements
    std::uint64_t reports_excluded = 0;   // failed verify_report at admission

    std::uint64_t cluster_blocks_committed = 0;
    std::uint64_t bft_rounds_proposed = 0;
    std::uint64_t bft_rounds_committed = 0;
    std::uint64_t bft_rounds_failed = 0;
    std::uint64_t degenerate_groups = 0; // f = 0 groups, flagged

    std::uint64_t beacons_sent = 0;
    std::uint64_t beacons_delivered = 0;

    std::uint64_t ledger_bytes = 0;    // persisted chain file size
    std::uint64_t naive_edr_bytes = 0; // sum of per-vehicle signed message logs
    double dedup_ratio = 0;            // ledger_bytes / naive_edr_bytes

    std::uint64_t chain_blocks = 0;
    std::uint64_t revocation_txs = 0;
    std::uint64_t introduction_txs = 0;

    std::uint32_t max_active_pseudonyms = 0; // per-tick scan maximum over all vehicles

    static std::string csv_header();
    std::string csv_row() const;
};

void write_metrics_csv(std::ostream& os, const RunMetrics& m);

} // namespace blackchain::harness
