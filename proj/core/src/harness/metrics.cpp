#include "blackchain/harness/metrics.hpp"

#include <ostream>
#include <sstream>

namespace blackchain::harness {

std::string RunMetrics::csv_header() {
    return "seed,ticks,attackers,revoked_attackers,max_revocation_latency,false_revocations,"
           "detections_fired,reports_generated,reports_committed,reports_aggregated,reports_excluded,"
           "cluster_blocks_committed,bft_rounds_proposed,bft_rounds_committed,bft_rounds_failed,"
           "degenerate_groups,beacons_sent,beacons_delivered,ledger_bytes,naive_edr_bytes,"
           "dedup_ratio,chain_blocks,revocation_txs,introduction_txs,max_active_pseudonyms";
}

std::string RunMetrics::csv_row() const {
    std::size_t revoked = 0;
    sim::Tick max_latency = 0;
    for (const auto& a : attackers) {
        auto lat = a.revocation_latency();
        if (lat) {
            revoked++;
            if (*lat > max_latency) max_latency = *lat;
        }
    }

    std::ostringstream os;
    os << seed << ',' << ticks << ',' << attackers.size() << ',' << revoked << ',' << max_latency
       << ',' << false_revocations << ',' << detections_fired << ',' << reports_generated << ',' << reports_committed << ','
       << reports_aggregated << ',' << reports_excluded << ',' << cluster_blocks_committed << ','
       << bft_rounds_proposed << ',' << bft_rounds_committed << ',' << bft_rounds_failed << ','
       << degenerate_groups << ',' << beacons_sent << ',' << beacons_delivered << ','
       << ledger_bytes << ',' << naive_edr_bytes << ',' << dedup_ratio << ',' << chain_blocks
       << ',' << revocation_txs << ',' << introduction_txs << ',' << max_active_pseudonyms;
    return os.str();
}

void write_metrics_csv(std::ostream& os, const RunMetrics& m) {
    os << RunMetrics::csv_header() << '\n' << m.csv_row() << '\n';
}

} // namespace blackchain::harness
