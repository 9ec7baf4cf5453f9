#pragma once

#include <optional>

#include "blackchain/cluster/cluster.hpp"
#include "blackchain/vehicle/report.hpp"

namespace blackchain::cluster {

// Signed member endorsement over a candidate hash.
struct Endorsement {
    scms::PseudonymCert voter;
    Signature sig;

    void encode(ByteWriter& w) const {
        voter.encode(w);
        w.u64(sig.e);
        w.u64(sig.s);
    }
    static Endorsement decode(ByteReader& r) {
        Endorsement e;
        e.voter = scms::PseudonymCert::decode(r);
        e.sig.e = r.u64();
        e.sig.s = r.u64();
        return e;
    }
};

struct RevocationTally {
    scms::PseudonymId suspect;
    std::vector<scms::PseudonymId> voters; // sorted, distinct

    void encode(ByteWriter& w) const {
        w.u64(suspect.value);
        w.u32(static_cast<std::uint32_t>(voters.size()));
        for (const auto& v : voters) w.u64(v.value);
    }
    static RevocationTally decode(ByteReader& r) {
        RevocationTally t;
        t.suspect.value = r.u64();
        std::uint32_t n = r.u32();
        t.voters.reserve(n);
        for (std::uint32_t i = 0; i < n; i++) t.voters.push_back(scms::PseudonymId{r.u64()});
        return t;
    }
};

// Permissioned per-cluster chain block. The chain hash covers everything
// except the endorsement set; endorsements sign that candidate hash, so the
// linkage is stable no matter which quorum subset a validator saw.
struct ClusterBlock {
    std::uint64_t cluster_id = 0;
    std::uint64_t height = 0;
    Hash256 prev_hash;
    sim::Tick tick = 0;
    std::vector<scms::PseudonymCert> member_certs;   // sorted by p_id
    std::vector<vehicle::MisbehaviorReport> reports; // sorted by report hash, distinct
    std::vector<RevocationTally> revocation_votes;   // sorted by suspect
    std::vector<Endorsement> endorsements;           // sorted by voter p_id

    std::size_t member_count() const { return member_certs.size(); }

    std::vector<std::uint8_t> candidate_bytes() const;
    Hash256 candidate_hash() const;
    void encode(ByteWriter& w) const;
    static ClusterBlock decode(ByteReader& r);
};

// Endorsements needed to commit: a simple majority of members.
inline std::size_t quorum_size(std::size_t members) { return members / 2 + 1; }

// Votes needed to locally revoke, counted over members excluding the suspect.
inline std::size_t local_revocation_threshold(std::size_t members) {
    return (members - 1) / 2 + 1;
}

// True iff distinct voters other than the suspect itself reach the local
// revocation threshold. A true result means the cluster ignores the suspect
// locally and flags it in the forwarded state.
bool local_revocation_decision(const ClusterBlock& block, scms::PseudonymId suspect);

Signature sign_endorsement(const scms::PseudonymWithKey& voter, const Hash256& candidate_hash);
bool verify_endorsement(const Endorsement& e, const Hash256& candidate_hash);

// Distinct valid endorsement count from cluster members over this block's
// candidate hash.
std::size_t count_valid_endorsements(const ClusterBlock& block);

bool has_commit_quorum(const ClusterBlock& block);

} // namespace blackchain::cluster
