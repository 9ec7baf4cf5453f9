#pragma once

#include <variant>

#include "blackchain/rsubft/statement.hpp"

namespace blackchain::ledger {

enum class ParticipantKind : std::uint8_t { rsu = 0, ma = 1, rsu_group = 2 };

// Approval by an existing public-chain participant for introducing a new one.
struct Approval {
    PublicKey approver;
    Signature sig;
};

// Introduces a participant (an RSU, MA or group key) into the public chain
// by consensus of the existing participants: a majority of the participants
// introduced in strictly earlier blocks must approve. Genesis participants
// are defined by config and need no approvals.
struct IntroductionTx {
    ParticipantKind kind = ParticipantKind::rsu;
    sim::NodeId subject_id;
    PublicKey subject_pk;
    std::vector<Approval> approvals; // sorted by approver key, distinct

    std::vector<std::uint8_t> subject_bytes() const;
    void encode(ByteWriter& w) const;
    static IntroductionTx decode(ByteReader& r);
};

Signature sign_approval(const KeyPair& approver, const IntroductionTx& tx);

// Revocation decision on the public chain: the quorum-certified statement
// (reports with evidence for internal consistency), the RSU-group signature
// set, references resolving each signer to its introduction on-chain, and
// the decided suspects.
struct RevocationTx {
    rsubft::AggregatedStatement statement;
    std::vector<Hash256> references; // one per cert signer, same order
    std::vector<scms::PseudonymId> decided; // sorted

    void encode(ByteWriter& w) const;
    static RevocationTx decode(ByteReader& r);
};

using Transaction = std::variant<IntroductionTx, RevocationTx>;

void encode_tx(const Transaction& tx, ByteWriter& w);
Transaction decode_tx(ByteReader& r);
Hash256 tx_hash(const Transaction& tx);

} // namespace blackchain::ledger
