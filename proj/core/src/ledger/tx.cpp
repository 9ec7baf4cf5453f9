#include "blackchain/ledger/tx.hpp"

#include "blackchain/sha256.hpp"

namespace blackchain::ledger {

std::vector<std::uint8_t> IntroductionTx::subject_bytes() const {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(kind));
    subject_id.encode(w);
    w.u64(subject_pk.y);
    return w.take();
}

void IntroductionTx::encode(ByteWriter& w) const {
    w.u8(static_cast<std::uint8_t>(kind));
    subject_id.encode(w);
    w.u64(subject_pk.y);
    w.u32(static_cast<std::uint32_t>(approvals.size()));
    for (const auto& a : approvals) {
        w.u64(a.approver.y);
        w.u64(a.sig.e);
        w.u64(a.sig.s);
    }
}

IntroductionTx IntroductionTx::decode(ByteReader& r) {
    IntroductionTx tx;
    std::uint8_t k = r.u8();
    if (k > 2) throw DecodeError("bad participant kind");
    tx.kind = static_cast<ParticipantKind>(k);
    tx.subject_id = sim::NodeId::decode(r);
    tx.subject_pk.y = r.u64();
    std::uint32_t n = r.u32();
    tx.approvals.reserve(n);
    for (std::uint32_t i = 0; i < n; i++) {
        Approval a;
        a.approver.y = r.u64();
        a.sig.e = r.u64();
        a.sig.s = r.u64();
        tx.approvals.push_back(a);
    }
    return tx;
}

Signature sign_approval(const KeyPair& approver, const IntroductionTx& tx) {
    return schnorr::sign(approver.sk, approver.pk, SigDomain::participant_approval,
                         tx.subject_bytes());
}

void RevocationTx::encode(ByteWriter& w) const {
    statement.encode(w);
    w.u32(static_cast<std::uint32_t>(references.size()));
    for (const auto& h : references) w.hash(h);
    w.u32(static_cast<std::uint32_t>(decided.size()));
    for (const auto& p : decided) w.u64(p.value);
}

RevocationTx RevocationTx::decode(ByteReader& r) {
    RevocationTx tx;
    tx.statement = rsubft::AggregatedStatement::decode(r);
    std::uint32_t nr = r.u32();
    tx.references.reserve(nr);
    for (std::uint32_t i = 0; i < nr; i++) tx.references.push_back(r.hash());
    std::uint32_t nd = r.u32();
    tx.decided.reserve(nd);
    for (std::uint32_t i = 0; i < nd; i++) tx.decided.push_back(scms::PseudonymId{r.u64()});
    return tx;
}

void encode_tx(const Transaction& tx, ByteWriter& w) {
    if (std::holds_alternative<IntroductionTx>(tx)) {
        w.u8(0);
        std::get<IntroductionTx>(tx).encode(w);
    } else {
        w.u8(1);
        std::get<RevocationTx>(tx).encode(w);
    }
}

Transaction decode_tx(ByteReader& r) {
    std::uint8_t kind = r.u8();
    if (kind == 0) return IntroductionTx::decode(r);
    if (kind == 1) return RevocationTx::decode(r);
    throw DecodeError("bad tx kind");
}

Hash256 tx_hash(const Transaction& tx) {
    ByteWriter w;
    encode_tx(tx, w);
    return sha256(w.data());
}

} // namespace blackchain::ledger
