#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "blackchain/sim/geometry.hpp"

namespace blackchain::sim {

// Unit-disc propagation: no loss, no contention. The boundary comparison is
// inclusive (dist == range receives) for reproducibility.
struct RadioModel {
    double range_m = 500.0;

    static constexpr double kMinRange = 300.0;
    static constexpr double kMaxRange = 1000.0;
};

// Nodes (excluding the sender) within radio range of the sender's position.
// Results follow the map's key order, so delivery order is deterministic.
// The sender must have a position.
template <typename Key>
std::vector<Key> in_range(const Key& sender, const std::map<Key, Position>& positions,
                          const RadioModel& radio) {
    auto self = positions.find(sender);
    if (self == positions.end()) throw std::logic_error("broadcast sender has no position");
    std::vector<Key> out;
    for (const auto& [id, pos] : positions) {
        if (id == sender) continue;
        if (distance(self->second, pos) <= radio.range_m) out.push_back(id);
    }
    return out;
}

} // namespace blackchain::sim
