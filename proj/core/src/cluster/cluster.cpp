#include "blackchain/cluster/cluster.hpp"

#include "blackchain/sha256.hpp"

namespace blackchain::cluster {

std::uint64_t derive_cluster_id(sim::Tick formed_at,
                                const std::vector<scms::PseudonymId>& members) {
    ByteWriter w;
    w.str("cluster");
    w.u64(formed_at);
    w.u32(static_cast<std::uint32_t>(members.size()));
    for (const auto& m : members) w.u64(m.value);
    return fold64(sha256(w.data()));
}

std::vector<Cluster> form_clusters(const std::map<scms::PseudonymId, sim::Position>& positions,
                                   const sim::RadioModel& radio, sim::Tick now) {
    std::vector<Cluster> out;
    std::map<scms::PseudonymId, bool> assigned;
    for (const auto& [p, _] : positions) assigned[p] = false;

    for (const auto& [seed, seed_pos] : positions) {
        if (assigned[seed]) continue;
        Cluster c;
        c.formed_at = now;
        c.members.push_back(seed);
        assigned[seed] = true;

        std::vector<sim::Position> member_pos{seed_pos};
        for (const auto& [cand, cand_pos] : positions) {
            if (assigned[cand]) continue;
            bool near_all = true;
            for (const auto& mp : member_pos) {
                if (sim::distance(mp, cand_pos) > radio.range_m) {
                    near_all = false;
                    break;
                }
            }
            if (near_all) {
                c.members.push_back(cand);
                member_pos.push_back(cand_pos);
                assigned[cand] = true;
            }
        }

        c.head = c.members.front(); // smallest id: map iteration is ascending
        c.cluster_id = derive_cluster_id(now, c.members);
        out.push_back(std::move(c));
    }
    return out;
}

std::optional<sim::NodeId> nearest_rsu_in_range(const sim::Position& head,
                                                const std::map<sim::NodeId, sim::Position>& rsus,
                                                const sim::RadioModel& radio) {
    std::optional<sim::NodeId> best;
    double best_dist = 0;
    for (const auto& [id, pos] : rsus) {
        double d = sim::distance(head, pos);
        if (d > radio.range_m) continue;
        if (!best || d < best_dist) { // strict <: lower id wins ties
            best = id;
            best_dist = d;
        }
    }
    return best;
}

} // namespace blackchain::cluster
