#pragma once

#include <cmath>

#include "blackchain/bytes.hpp"

namespace blackchain::sim {

struct Position {
    double x = 0;
    double y = 0;

    bool operator==(const Position&) const = default;

    void encode(ByteWriter& w) const {
        w.f64(x);
        w.f64(y);
    }
    static Position decode(ByteReader& r) {
        Position p;
        p.x = r.f64();
        p.y = r.f64();
        return p;
    }
};

inline double distance(const Position& a, const Position& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

} // namespace blackchain::sim
