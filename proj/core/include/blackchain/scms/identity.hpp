#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "blackchain/bytes.hpp"
#include "blackchain/schnorr.hpp"
#include "blackchain/sim/clock.hpp"
#include "blackchain/sim/node_id.hpp"

namespace blackchain::scms {

struct LtId {
    std::uint64_t value = 0;
    auto operator<=>(const LtId&) const = default;
};

struct PseudonymId {
    std::uint64_t value = 0;
    auto operator<=>(const PseudonymId&) const = default;
};

// Public pseudonym certificate, attached to every signed broadcast. The PCA
// signature binds id, key, validity window and issuing region, so any party
// holding the region's PCA key can check it offline.
struct PseudonymCert {
    PseudonymId p_id;
    PublicKey pk;
    sim::Tick valid_from = 0;
    sim::Tick valid_to = 0;
    std::uint32_t region = 0;
    Signature pca_sig;

    bool valid_at(sim::Tick t) const { return valid_from <= t && t <= valid_to; }

    std::vector<std::uint8_t> signed_bytes() const {
        ByteWriter w;
        w.u64(p_id.value);
        w.u64(pk.y);
        w.u64(valid_from);
        w.u64(valid_to);
        w.u32(region);
        return w.take();
    }

    void encode(ByteWriter& w) const {
        w.u64(p_id.value);
        w.u64(pk.y);
        w.u64(valid_from);
        w.u64(valid_to);
        w.u32(region);
        w.u64(pca_sig.e);
        w.u64(pca_sig.s);
    }
    static PseudonymCert decode(ByteReader& r) {
        PseudonymCert c;
        c.p_id.value = r.u64();
        c.pk.y = r.u64();
        c.valid_from = r.u64();
        c.valid_to = r.u64();
        c.region = r.u32();
        c.pca_sig.e = r.u64();
        c.pca_sig.s = r.u64();
        return c;
    }

    bool operator==(const PseudonymCert&) const = default;
};

// SCMS-internal pseudonym record. The linkage token is a sealed reference:
// it resolves to the owning long-term id only through the authority's
// authorized lookup, never from the cert itself.
struct Pseudonym {
    PseudonymCert cert;
    std::uint64_t linkage_token = 0;
};

// Vehicle-held credential: cert plus the signing key.
struct PseudonymWithKey {
    PseudonymCert cert;
    PrivateKey sk;
};

struct LongTermCertificate {
    sim::NodeId holder;
    LtId lt_id;
    PublicKey pk;
    bool revoked = false;
};

struct RevocationState {
    std::set<LtId> revoked_lt;
    std::set<PseudonymId> revoked_pseudonyms;
    std::set<LtId> ra_blacklist;
};

// Public verification anchors shared by every validator, including the
// offline chain auditor: per-region PCA keys.
struct TrustAnchors {
    std::map<std::uint32_t, PublicKey> pca_keys;

    bool verify_cert(const PseudonymCert& c) const {
        auto it = pca_keys.find(c.region);
        if (it == pca_keys.end()) return false;
        return schnorr::verify(it->second, SigDomain::pca_cert, c.signed_bytes(), c.pca_sig);
    }
};

} // namespace blackchain::scms
