#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "blackchain/bytes.hpp"

namespace blackchain::sim {

enum class NodeKind : std::uint8_t { vehicle = 0, rsu = 1, ma = 2 };

// Ground-truth simulator identity. Stable across the whole run, unlike
// pseudonyms; never visible to the protocol logic of other nodes.
struct NodeId {
    NodeKind kind = NodeKind::vehicle;
    std::uint32_t index = 0;

    auto operator<=>(const NodeId&) const = default;

    void encode(ByteWriter& w) const {
        w.u8(static_cast<std::uint8_t>(kind));
        w.u32(index);
    }
    static NodeId decode(ByteReader& r) {
        NodeId id;
        std::uint8_t k = r.u8();
        if (k > 2) throw DecodeError("bad node kind");
        id.kind = static_cast<NodeKind>(k);
        id.index = r.u32();
        return id;
    }
};

inline std::string to_string(const NodeId& id) {
    const char* k = id.kind == NodeKind::vehicle ? "v" : id.kind == NodeKind::rsu ? "rsu" : "ma";
    return std::string(k) + std::to_string(id.index);
}

inline NodeId vehicle_id(std::uint32_t i) { return NodeId{NodeKind::vehicle, i}; }
inline NodeId rsu_id(std::uint32_t i) { return NodeId{NodeKind::rsu, i}; }
inline NodeId ma_id(std::uint32_t i) { return NodeId{NodeKind::ma, i}; }

} // namespace blackchain::sim
