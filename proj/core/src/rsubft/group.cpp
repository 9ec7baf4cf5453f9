#include "blackchain/rsubft/group.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "blackchain/sha256.hpp"

namespace blackchain::rsubft {

bool RsuGroup::contains(sim::NodeId id) const {
    return std::binary_search(members.begin(), members.end(), id);
}

std::uint64_t derive_group_id(std::int32_t cell_i, std::int32_t cell_j) {
    ByteWriter w;
    w.str("rsu-group");
    w.u32(static_cast<std::uint32_t>(cell_i));
    w.u32(static_cast<std::uint32_t>(cell_j));
    return fold64(sha256(w.data()));
}

std::vector<RsuGroup> group_rsus(const std::map<sim::NodeId, sim::Position>& rsu_positions,
                                 double cell_size_m) {
    if (cell_size_m <= 0) throw std::invalid_argument("cell_size_m must be > 0");

    std::map<std::pair<std::int32_t, std::int32_t>, RsuGroup> cells;
    for (const auto& [id, pos] : rsu_positions) {
        auto ci = static_cast<std::int32_t>(std::floor(pos.x / cell_size_m));
        auto cj = static_cast<std::int32_t>(std::floor(pos.y / cell_size_m));
        auto& g = cells[{ci, cj}];
        g.cell_i = ci;
        g.cell_j = cj;
        g.members.push_back(id); // map order keeps members sorted
    }

    std::vector<RsuGroup> out;
    out.reserve(cells.size());
    for (auto& [cell, g] : cells) {
        g.group_id = derive_group_id(cell.first, cell.second);
        out.push_back(std::move(g));
    }
    return out;
}

} // namespace blackchain::rsubft
