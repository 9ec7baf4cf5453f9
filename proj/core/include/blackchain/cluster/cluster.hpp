#pragma once

#include <map>
#include <optional>
#include <vector>

#include "blackchain/scms/identity.hpp"
#include "blackchain/sim/radio.hpp"

namespace blackchain::cluster {

// Geographic cluster over pseudonym identities. The head is the smallest
// member id; the id binds the formation tick, so a re-formed cluster starts
// a fresh chain and blocks of dissolved clusters stay attributable.
struct Cluster {
    std::uint64_t cluster_id = 0;
    std::vector<scms::PseudonymId> members; // sorted
    scms::PseudonymId head;
    sim::Tick formed_at = 0;
};

std::uint64_t derive_cluster_id(sim::Tick formed_at,
                                const std::vector<scms::PseudonymId>& members);

// Greedy maximal-clique approximation: seed with the smallest unassigned
// pseudonym id, then add every unassigned vehicle (ascending id) within
// range of all current members. Deterministic by construction. Positions
// must contain only active, non-revoked pseudonyms.
std::vector<Cluster> form_clusters(const std::map<scms::PseudonymId, sim::Position>& positions,
                                   const sim::RadioModel& radio, sim::Tick now);

// Delivery target for committed blocks: the nearest RSU within radio range
// of the head, distance ties broken by the lower node id. Heads buffer and
// retry while this is empty.
std::optional<sim::NodeId> nearest_rsu_in_range(const sim::Position& head,
                                                const std::map<sim::NodeId, sim::Position>& rsus,
                                                const sim::RadioModel& radio);

} // namespace blackchain::cluster
