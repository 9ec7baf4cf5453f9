#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "blackchain/sim/geometry.hpp"
#include "blackchain/sim/node_id.hpp"

namespace blackchain::rsubft {

// RSUs grouped by grid cell; membership is static per run. f is the
// Byzantine fault bound implied by the group size.
struct RsuGroup {
    std::uint64_t group_id = 0;
    std::int32_t cell_i = 0;
    std::int32_t cell_j = 0;
    std::vector<sim::NodeId> members; // sorted

    std::size_t size() const { return members.size(); }
    std::size_t f() const { return (members.size() - 1) / 3; }
    std::size_t quorum() const { return 2 * f() + 1; }
    // Degenerate groups (f = 0) commit single-signer and are flagged in metrics.
    bool degenerate() const { return f() == 0; }

    bool contains(sim::NodeId id) const;
    // Height-leader: members sorted by NodeId, rotated by height.
    sim::NodeId leader_at(std::uint64_t height) const {
        return members[height % members.size()];
    }
};

std::uint64_t derive_group_id(std::int32_t cell_i, std::int32_t cell_j);

// Assigns each RSU to the group of its grid cell (floor(x/cell), floor(y/cell)).
std::vector<RsuGroup> group_rsus(const std::map<sim::NodeId, sim::Position>& rsu_positions,
                                 double cell_size_m);

} // namespace blackchain::rsubft
