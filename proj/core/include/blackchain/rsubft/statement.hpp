#pragma once

#include <functional>
#include <optional>

#include "blackchain/cluster/block.hpp"
#include "blackchain/rsubft/group.hpp"

namespace blackchain::rsubft {

struct RevocationCandidate {
    scms::PseudonymId suspect;
    std::vector<Hash256> support; // report hashes in the evidence bundle, sorted

    void encode(ByteWriter& w) const {
        w.u64(suspect.value);
        w.u32(static_cast<std::uint32_t>(support.size()));
        for (const auto& h : support) w.hash(h);
    }
    static RevocationCandidate decode(ByteReader& r) {
        RevocationCandidate c;
        c.suspect.value = r.u64();
        std::uint32_t n = r.u32();
        c.support.reserve(n);
        for (std::uint32_t i = 0; i < n; i++) c.support.push_back(r.hash());
        return c;
    }
};

struct QuorumCert {
    std::vector<std::pair<sim::NodeId, Signature>> sigs; // sorted by NodeId, distinct

    void encode(ByteWriter& w) const {
        w.u32(static_cast<std::uint32_t>(sigs.size()));
        for (const auto& [id, sig] : sigs) {
            id.encode(w);
            w.u64(sig.e);
            w.u64(sig.s);
        }
    }
    static QuorumCert decode(ByteReader& r) {
        QuorumCert qc;
        std::uint32_t n = r.u32();
        qc.sigs.reserve(n);
        for (std::uint32_t i = 0; i < n; i++) {
            sim::NodeId id = sim::NodeId::decode(r);
            Signature s;
            s.e = r.u64();
            s.s = r.u64();
            qc.sigs.emplace_back(id, s);
        }
        return qc;
    }
};

// Quorum-certified aggregate of cluster blocks for one (group, height):
// included block hashes, locally-decided revocation candidates with their
// supporting report hashes, and the deduplicated evidence bundle.
struct AggregatedStatement {
    std::uint64_t group_id = 0;
    std::uint64_t height = 0;
    std::vector<Hash256> included_blocks;                  // sorted
    std::vector<RevocationCandidate> candidates;           // sorted by suspect
    std::vector<vehicle::MisbehaviorReport> evidence_bundle; // sorted by report hash
    QuorumCert cert;

    std::vector<std::uint8_t> statement_bytes() const; // everything except cert
    Hash256 statement_hash() const;
    void encode(ByteWriter& w) const;
    static AggregatedStatement decode(ByteReader& r);
};

// Pure derivation of the uncertified statement from a set of validated
// cluster blocks; every honest group member computes the identical bytes.
// Candidates are suspects with a positive local revocation decision in some
// block, backed by at least one verified report naming them.
AggregatedStatement aggregate(std::uint64_t group_id, std::uint64_t height,
                              const std::vector<cluster::ClusterBlock>& blocks);

Signature sign_statement(const KeyPair& rsu_key, const Hash256& statement_hash);

// 2f+1 distinct group members with valid signatures over this statement hash.
bool verify_quorum_cert(const AggregatedStatement& stmt, const RsuGroup& group,
                        const std::map<sim::NodeId, PublicKey>& rsu_keys);

enum class BlockFail : std::uint8_t {
    ok = 0,
    endorsement_quorum,
    member_cert,
    member_revoked,
    report_invalid,
    linkage_conflict,
};

const char* block_fail_name(BlockFail f);

struct BlockVerdict {
    bool ok = false;
    BlockFail reason = BlockFail::ok;
};

// True when the pseudonym stood revoked at the given tick.
using RevokedAtFn = std::function<bool(scms::PseudonymId, sim::Tick)>;

// Full independent re-validation of a cluster block: member certs, majority
// endorsement over the candidate hash, member revocation status as of the
// block tick, and re-execution of every report. `expected_prev` carries the
// validator's view of that cluster's chain when it has one; a first-seen
// block passes with any linkage, a known predecessor must match.
BlockVerdict validate_cluster_block(const cluster::ClusterBlock& block,
                                    const vehicle::VerifyContext& ctx,
                                    const RevokedAtFn& revoked_at,
                                    const std::optional<Hash256>& expected_prev);

} // namespace blackchain::rsubft
