#pragma once

#include <vector>

#include "blackchain/bytes.hpp"
#include "blackchain/scms/identity.hpp"
#include "blackchain/sim/clock.hpp"
#include "blackchain/sim/geometry.hpp"

namespace blackchain::vehicle {

struct KinematicState {
    sim::Position pos;
    double speed = 0;   // m/s, in [0, v_max]
    double heading = 0; // radians, in [0, 2*pi)

    void encode(ByteWriter& w) const {
        pos.encode(w);
        w.f64(speed);
        w.f64(heading);
    }
    static KinematicState decode(ByteReader& r) {
        KinematicState k;
        k.pos = sim::Position::decode(r);
        k.speed = r.f64();
        k.heading = r.f64();
        return k;
    }
};

// Periodic broadcast: kinematic state signed under the currently active
// pseudonym, with the pseudonym certificate attached.
struct Beacon {
    scms::PseudonymCert cert;
    sim::Tick tick = 0;
    KinematicState state;
    std::vector<std::uint8_t> meta;
    Signature sig;

    scms::PseudonymId p_id() const { return cert.p_id; }

    std::vector<std::uint8_t> signed_bytes() const;
    void encode(ByteWriter& w) const;
    static Beacon decode(ByteReader& r);
    std::vector<std::uint8_t> encoded() const {
        ByteWriter w;
        encode(w);
        return w.take();
    }
    Hash256 hash() const;
};

Beacon make_beacon(const scms::PseudonymWithKey& cred, sim::Tick tick, const KinematicState& state,
                   std::vector<std::uint8_t> meta = {});

// Signature under the attached cert's key only.
bool verify_beacon_signature(const Beacon& b);

// Full check: PCA cert signature, validity window at the beacon tick, and
// the beacon signature itself.
bool verify_beacon(const Beacon& b, const scms::TrustAnchors& anchors);

} // namespace blackchain::vehicle
