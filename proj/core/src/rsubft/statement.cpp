#include "blackchain/rsubft/statement.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "blackchain/sha256.hpp"

namespace blackchain::rsubft {

std::vector<std::uint8_t> AggregatedStatement::statement_bytes() const {
    ByteWriter w;
    w.u64(group_id);
    w.u64(height);
    w.u32(static_cast<std::uint32_t>(included_blocks.size()));
    for (const auto& h : included_blocks) w.hash(h);
    w.u32(static_cast<std::uint32_t>(candidates.size()));
    for (const auto& c : candidates) c.encode(w);
    w.u32(static_cast<std::uint32_t>(evidence_bundle.size()));
    for (const auto& r : evidence_bundle) r.encode(w);
    return w.take();
}

Hash256 AggregatedStatement::statement_hash() const { return sha256(statement_bytes()); }

void AggregatedStatement::encode(ByteWriter& w) const {
    auto body = statement_bytes();
    w.raw(body.data(), body.size());
    cert.encode(w);
}

AggregatedStatement AggregatedStatement::decode(ByteReader& r) {
    AggregatedStatement s;
    s.group_id = r.u64();
    s.height = r.u64();
    std::uint32_t nb = r.u32();
    s.included_blocks.reserve(nb);
    for (std::uint32_t i = 0; i < nb; i++) s.included_blocks.push_back(r.hash());
    std::uint32_t nc = r.u32();
    s.candidates.reserve(nc);
    for (std::uint32_t i = 0; i < nc; i++) s.candidates.push_back(RevocationCandidate::decode(r));
    std::uint32_t ne = r.u32();
    s.evidence_bundle.reserve(ne);
    for (std::uint32_t i = 0; i < ne; i++)
        s.evidence_bundle.push_back(vehicle::MisbehaviorReport::decode(r));
    s.cert = QuorumCert::decode(r);
    return s;
}

AggregatedStatement aggregate(std::uint64_t group_id, std::uint64_t height,
                              const std::vector<cluster::ClusterBlock>& blocks) {
    AggregatedStatement stmt;
    stmt.group_id = group_id;
    stmt.height = height;

    // included block hashes, sorted
    for (const auto& b : blocks) stmt.included_blocks.push_back(b.candidate_hash());
    std::sort(stmt.included_blocks.begin(), stmt.included_blocks.end());
    stmt.included_blocks.erase(
        std::unique(stmt.included_blocks.begin(), stmt.included_blocks.end()),
        stmt.included_blocks.end());

    // evidence bundle: reports deduplicated by hash across all blocks.
    // This is exactly the cross-vehicle de-duplication a per-vehicle EDR
    // cannot do.
    std::map<Hash256, const vehicle::MisbehaviorReport*> by_hash;
    for (const auto& b : blocks)
        for (const auto& r : b.reports) by_hash.emplace(r.hash(), &r);
    for (const auto& [h, r] : by_hash) stmt.evidence_bundle.push_back(*r);

    // candidates: positive local revocation decision in some block, backed
    // by at least one report naming the suspect
    std::set<scms::PseudonymId> flagged;
    for (const auto& b : blocks) {
        for (const auto& tally : b.revocation_votes) {
            if (cluster::local_revocation_decision(b, tally.suspect))
                flagged.insert(tally.suspect);
        }
    }
    for (const auto& suspect : flagged) {
        RevocationCandidate cand;
        cand.suspect = suspect;
        for (const auto& [h, r] : by_hash) {
            if (std::binary_search(r->suspects.begin(), r->suspects.end(), suspect))
                cand.support.push_back(h);
        }
        if (!cand.support.empty()) stmt.candidates.push_back(std::move(cand));
    }
    return stmt;
}

Signature sign_statement(const KeyPair& rsu_key, const Hash256& statement_hash) {
    return schnorr::sign(rsu_key.sk, rsu_key.pk, SigDomain::rsu_echo, statement_hash.bytes.data(),
                         statement_hash.bytes.size());
}

bool verify_quorum_cert(const AggregatedStatement& stmt, const RsuGroup& group,
                        const std::map<sim::NodeId, PublicKey>& rsu_keys) {
    const Hash256 h = stmt.statement_hash();
    std::set<sim::NodeId> signers;
    for (const auto& [id, sig] : stmt.cert.sigs) {
        if (!group.contains(id)) return false;
        auto key = rsu_keys.find(id);
        if (key == rsu_keys.end()) return false;
        if (!schnorr::verify(key->second, SigDomain::rsu_echo, h.bytes.data(), h.bytes.size(), sig))
            return false;
        signers.insert(id);
    }
    return signers.size() >= group.quorum();
}

const char* block_fail_name(BlockFail f) {
    switch (f) {
        case BlockFail::ok: return "ok";
        case BlockFail::endorsement_quorum: return "endorsement_quorum";
        case BlockFail::member_cert: return "member_cert";
        case BlockFail::member_revoked: return "member_revoked";
        case BlockFail::report_invalid: return "report_invalid";
        case BlockFail::linkage_conflict: return "linkage_conflict";
    }
    return "?";
}

BlockVerdict validate_cluster_block(const cluster::ClusterBlock& block,
                                    const vehicle::VerifyContext& ctx,
                                    const RevokedAtFn& revoked_at,
                                    const std::optional<Hash256>& expected_prev) {
    auto fail = [](BlockFail f) { return BlockVerdict{false, f}; };

    if (expected_prev.has_value() && block.prev_hash != *expected_prev)
        return fail(BlockFail::linkage_conflict);

    if (block.member_certs.empty()) return fail(BlockFail::member_cert);
    for (const auto& cert : block.member_certs) {
        if (!ctx.anchors.verify_cert(cert) || !cert.valid_at(block.tick))
            return fail(BlockFail::member_cert);
        if (revoked_at && revoked_at(cert.p_id, block.tick))
            return fail(BlockFail::member_revoked);
    }

    if (!cluster::has_commit_quorum(block)) return fail(BlockFail::endorsement_quorum);

    for (const auto& r : block.reports) {
        if (!vehicle::verify_report(r, ctx).ok) return fail(BlockFail::report_invalid);
    }
    return BlockVerdict{true, BlockFail::ok};
}

} // namespace blackchain::rsubft
