#pragma once

#include <iosfwd>
#include <string>

#include "blackchain/ledger/block.hpp"
#include "blackchain/scms/scms.hpp"

namespace blackchain::ledger {

// Everything the offline auditor needs to re-verify a chain from its bytes:
// PoW difficulty, genesis participants, trust anchors, detection parameters
// and the RSU registry from which groups are re-derived.
struct GenesisConfig {
    std::uint32_t difficulty_bits = 8;
    std::vector<PublicKey> genesis_participants; // the MAs by default
    scms::TrustAnchors anchors;
    vehicle::DetectionParams det;
    std::map<sim::NodeId, std::pair<PublicKey, sim::Position>> rsu_registry;
    double rsu_cell_m = 2000.0;
};

enum class ChainFail : std::uint8_t {
    ok = 0,
    parse,
    height_sequence,
    prev_hash,
    pow,
    tx_order,
    intro_duplicate,
    intro_approver_unknown,
    intro_approval_sig,
    intro_threshold,
    revocation_group_unknown,
    revocation_cert,
    revocation_reference,
    revocation_evidence,
    revocation_candidates,
};

const char* chain_fail_name(ChainFail f);

struct AuditVerdict {
    bool ok = false;
    ChainFail reason = ChainFail::ok;
    std::uint64_t block_height = 0; // first failure locus
    std::size_t tx_index = 0;
    std::string detail;
};

// Participant registry as of a chain prefix.
struct ParticipantView {
    struct Record {
        Hash256 intro_tx;          // zero for genesis participants
        std::uint64_t intro_height = 0;
        bool genesis = false;
    };
    std::map<PublicKey, Record> by_key;
    std::map<Hash256, PublicKey> by_intro_tx;

    std::size_t count() const { return by_key.size(); }
    bool introduced(const PublicKey& pk) const { return by_key.count(pk) > 0; }
};

inline std::size_t introduction_threshold(std::size_t participants) {
    return participants / 2 + 1;
}

struct TxVerdict {
    bool ok = false;
    ChainFail reason = ChainFail::ok;
    std::string detail;
};

// Validates one transaction against the participant view of strictly
// earlier blocks. Used identically by miners filtering the mempool and by
// the chain verifier.
TxVerdict validate_tx(const Transaction& tx, const ParticipantView& view,
                      const GenesisConfig& genesis);

// Assembles a revocation transaction from a quorum-certified statement:
// resolves every cert signer to its on-chain introduction and decides all
// candidate suspects. Refuses when a signer is not yet introduced or the
// statement does not fully re-verify (tampered evidence included).
struct BuildTxResult {
    std::optional<RevocationTx> tx;
    std::string error;
};
BuildTxResult build_revocation_tx(const rsubft::AggregatedStatement& stmt,
                                  const ParticipantView& view, const GenesisConfig& genesis);

// Assembles an introduction transaction with the given approvals (sorted,
// deduplicated). Validity is judged by validate_tx at inclusion.
IntroductionTx make_introduction_tx(ParticipantKind kind, sim::NodeId subject_id,
                                    const PublicKey& subject_pk, std::vector<Approval> approvals);

// The full audit: PoW and linkage per block, canonical tx order,
// introduction thresholds at their heights, revocation references resolving
// to earlier introductions, quorum certificates, and re-execution of every
// embedded report from the evidence up.
AuditVerdict verify_chain(const std::vector<GlobalBlock>& chain, const GenesisConfig& genesis);

// Participant view after applying the whole (assumed verified) chain.
ParticipantView view_of_chain(const std::vector<GlobalBlock>& chain,
                              const GenesisConfig& genesis);

// Total work, for fork choice: strictly more accumulated difficulty wins,
// ties go to the lexicographically lower tip hash.
std::uint64_t total_difficulty(const std::vector<GlobalBlock>& chain,
                               const GenesisConfig& genesis);
bool chain_preferred(const std::vector<GlobalBlock>& candidate,
                     const std::vector<GlobalBlock>& current, const GenesisConfig& genesis);

// Chain file: a bare sequence of u32-length-prefixed canonical block
// encodings.
void write_chain_file(std::ostream& os, const std::vector<GlobalBlock>& chain);
std::vector<std::uint8_t> chain_file_bytes(const std::vector<GlobalBlock>& chain);

struct ChainParseResult {
    std::vector<GlobalBlock> chain;
    bool ok = false;
    std::string error;
};
ChainParseResult parse_chain_file(const std::vector<std::uint8_t>& bytes);

// Line-delimited structured text rendering for inspection.
void export_chain_text(std::ostream& os, const std::vector<GlobalBlock>& chain);

// Effects of a verified block on the SCMS services: register the committed
// decision, resolve each decided pseudonym where its issuer can, then
// revoke the owner at home and blacklist it in every region. Idempotent;
// linkage failures are recorded, the chain itself is never altered.
struct ApplyOutcome {
    std::vector<scms::LtId> newly_revoked;
    std::size_t resolution_failures = 0;
};
ApplyOutcome apply_revocations(const GlobalBlock& block,
                               std::vector<scms::ScmsService*>& regions, sim::Tick now);

} // namespace blackchain::ledger
