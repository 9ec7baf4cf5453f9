#include "blackchain/vehicle/beacon.hpp"

#include "blackchain/sha256.hpp"

namespace blackchain::vehicle {

std::vector<std::uint8_t> Beacon::signed_bytes() const {
    ByteWriter w;
    cert.encode(w);
    w.u64(tick);
    state.encode(w);
    w.bytes(meta);
    return w.take();
}

void Beacon::encode(ByteWriter& w) const {
    cert.encode(w);
    w.u64(tick);
    state.encode(w);
    w.bytes(meta);
    w.u64(sig.e);
    w.u64(sig.s);
}

Beacon Beacon::decode(ByteReader& r) {
    Beacon b;
    b.cert = scms::PseudonymCert::decode(r);
    b.tick = r.u64();
    b.state = KinematicState::decode(r);
    b.meta = r.bytes();
    b.sig.e = r.u64();
    b.sig.s = r.u64();
    return b;
}

Hash256 Beacon::hash() const { return sha256(encoded()); }

Beacon make_beacon(const scms::PseudonymWithKey& cred, sim::Tick tick, const KinematicState& state,
                   std::vector<std::uint8_t> meta) {
    Beacon b;
    b.cert = cred.cert;
    b.tick = tick;
    b.state = state;
    b.meta = std::move(meta);
    b.sig = schnorr::sign(cred.sk, cred.cert.pk, SigDomain::beacon, b.signed_bytes());
    return b;
}

bool verify_beacon_signature(const Beacon& b) {
    return schnorr::verify(b.cert.pk, SigDomain::beacon, b.signed_bytes(), b.sig);
}

bool verify_beacon(const Beacon& b, const scms::TrustAnchors& anchors) {
    if (!anchors.verify_cert(b.cert)) return false;
    if (!b.cert.valid_at(b.tick)) return false;
    return verify_beacon_signature(b);
}

} // namespace blackchain::vehicle
