#include "blackchain/cluster/block.hpp"

#include <algorithm>
#include <set>

#include "blackchain/sha256.hpp"

namespace blackchain::cluster {

std::vector<std::uint8_t> ClusterBlock::candidate_bytes() const {
    ByteWriter w;
    w.u64(cluster_id);
    w.u64(height);
    w.hash(prev_hash);
    w.u64(tick);
    w.u32(static_cast<std::uint32_t>(member_certs.size()));
    for (const auto& c : member_certs) c.encode(w);
    w.u32(static_cast<std::uint32_t>(reports.size()));
    for (const auto& r : reports) r.encode(w);
    w.u32(static_cast<std::uint32_t>(revocation_votes.size()));
    for (const auto& t : revocation_votes) t.encode(w);
    return w.take();
}

Hash256 ClusterBlock::candidate_hash() const { return sha256(candidate_bytes()); }

void ClusterBlock::encode(ByteWriter& w) const {
    auto body = candidate_bytes();
    w.raw(body.data(), body.size());
    w.u32(static_cast<std::uint32_t>(endorsements.size()));
    for (const auto& e : endorsements) e.encode(w);
}

ClusterBlock ClusterBlock::decode(ByteReader& r) {
    ClusterBlock b;
    b.cluster_id = r.u64();
    b.height = r.u64();
    b.prev_hash = r.hash();
    b.tick = r.u64();
    std::uint32_t nm = r.u32();
    b.member_certs.reserve(nm);
    for (std::uint32_t i = 0; i < nm; i++)
        b.member_certs.push_back(scms::PseudonymCert::decode(r));
    std::uint32_t nr = r.u32();
    b.reports.reserve(nr);
    for (std::uint32_t i = 0; i < nr; i++)
        b.reports.push_back(vehicle::MisbehaviorReport::decode(r));
    std::uint32_t nv = r.u32();
    b.revocation_votes.reserve(nv);
    for (std::uint32_t i = 0; i < nv; i++) b.revocation_votes.push_back(RevocationTally::decode(r));
    std::uint32_t ne = r.u32();
    b.endorsements.reserve(ne);
    for (std::uint32_t i = 0; i < ne; i++) b.endorsements.push_back(Endorsement::decode(r));
    return b;
}

bool local_revocation_decision(const ClusterBlock& block, scms::PseudonymId suspect) {
    const std::size_t n = block.member_count();
    if (n <= 1) return false;
    for (const auto& tally : block.revocation_votes) {
        if (tally.suspect != suspect) continue;
        std::set<scms::PseudonymId> voters(tally.voters.begin(), tally.voters.end());
        voters.erase(suspect); // self-votes never count
        return voters.size() >= local_revocation_threshold(n);
    }
    return false;
}

Signature sign_endorsement(const scms::PseudonymWithKey& voter, const Hash256& candidate_hash) {
    return schnorr::sign(voter.sk, voter.cert.pk, SigDomain::cluster_endorse,
                         candidate_hash.bytes.data(), candidate_hash.bytes.size());
}

bool verify_endorsement(const Endorsement& e, const Hash256& candidate_hash) {
    return schnorr::verify(e.voter.pk, SigDomain::cluster_endorse, candidate_hash.bytes.data(),
                           candidate_hash.bytes.size(), e.sig);
}

std::size_t count_valid_endorsements(const ClusterBlock& block) {
    const Hash256 h = block.candidate_hash();
    std::set<scms::PseudonymId> members;
    for (const auto& c : block.member_certs) members.insert(c.p_id);

    std::set<scms::PseudonymId> voters;
    for (const auto& e : block.endorsements) {
        if (members.count(e.voter.p_id) == 0) continue;
        if (!verify_endorsement(e, h)) continue;
        voters.insert(e.voter.p_id);
    }
    return voters.size();
}

bool has_commit_quorum(const ClusterBlock& block) {
    return count_valid_endorsements(block) >= quorum_size(block.member_count());
}

} // namespace blackchain::cluster
