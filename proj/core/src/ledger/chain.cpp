#include "blackchain/ledger/chain.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include "blackchain/rsubft/group.hpp"
#include "blackchain/sha256.hpp"

namespace blackchain::ledger {

const char* chain_fail_name(ChainFail f) {
    switch (f) {
        case ChainFail::ok: return "ok";
        case ChainFail::parse: return "parse";
        case ChainFail::height_sequence: return "height_sequence";
        case ChainFail::prev_hash: return "prev_hash";
        case ChainFail::pow: return "pow";
        case ChainFail::tx_order: return "tx_order";
        case ChainFail::intro_duplicate: return "intro_duplicate";
        case ChainFail::intro_approver_unknown: return "intro_approver_unknown";
        case ChainFail::intro_approval_sig: return "intro_approval_sig";
        case ChainFail::intro_threshold: return "intro_threshold";
        case ChainFail::revocation_group_unknown: return "revocation_group_unknown";
        case ChainFail::revocation_cert: return "revocation_cert";
        case ChainFail::revocation_reference: return "revocation_reference";
        case ChainFail::revocation_evidence: return "revocation_evidence";
        case ChainFail::revocation_candidates: return "revocation_candidates";
    }
    return "?";
}

namespace {

struct GroupIndex {
    std::map<std::uint64_t, rsubft::RsuGroup> by_id;
    std::map<sim::NodeId, PublicKey> rsu_keys;
};

GroupIndex derive_groups(const GenesisConfig& g) {
    GroupIndex gi;
    std::map<sim::NodeId, sim::Position> positions;
    for (const auto& [id, reg] : g.rsu_registry) {
        positions[id] = reg.second;
        gi.rsu_keys[id] = reg.first;
    }
    if (!positions.empty()) {
        for (auto& grp : rsubft::group_rsus(positions, g.rsu_cell_m))
            gi.by_id.emplace(grp.group_id, std::move(grp));
    }
    return gi;
}

TxVerdict check_intro(const IntroductionTx& tx, const ParticipantView& view) {
    TxVerdict v;
    if (view.introduced(tx.subject_pk)) {
        v.reason = ChainFail::intro_duplicate;
        return v;
    }
    const auto subject = tx.subject_bytes();
    std::set<PublicKey> approvers;
    for (const auto& a : tx.approvals) {
        if (!view.introduced(a.approver)) {
            v.reason = ChainFail::intro_approver_unknown;
            return v;
        }
        if (!schnorr::verify(a.approver, SigDomain::participant_approval, subject, a.sig)) {
            v.reason = ChainFail::intro_approval_sig;
            return v;
        }
        approvers.insert(a.approver);
    }
    if (approvers.size() < introduction_threshold(view.count())) {
        v.reason = ChainFail::intro_threshold;
        v.detail = "approvals " + std::to_string(approvers.size()) + " of " +
                   std::to_string(view.count()) + " participants";
        return v;
    }
    v.ok = true;
    v.reason = ChainFail::ok;
    return v;
}

TxVerdict check_revocation(const RevocationTx& tx, const ParticipantView& view,
                           const GenesisConfig& genesis, const GroupIndex& groups) {
    TxVerdict v;
    const auto& stmt = tx.statement;

    auto grp = groups.by_id.find(stmt.group_id);
    if (grp == groups.by_id.end()) {
        v.reason = ChainFail::revocation_group_unknown;
        return v;
    }
    if (!rsubft::verify_quorum_cert(stmt, grp->second, groups.rsu_keys)) {
        v.reason = ChainFail::revocation_cert;
        return v;
    }

    // each signer resolves through its reference to a committed introduction
    if (tx.references.size() != stmt.cert.sigs.size()) {
        v.reason = ChainFail::revocation_reference;
        return v;
    }
    for (std::size_t i = 0; i < stmt.cert.sigs.size(); i++) {
        const sim::NodeId signer = stmt.cert.sigs[i].first;
        auto key = groups.rsu_keys.find(signer);
        if (key == groups.rsu_keys.end()) {
            v.reason = ChainFail::revocation_reference;
            return v;
        }
        auto ref = view.by_intro_tx.find(tx.references[i]);
        if (ref == view.by_intro_tx.end() || !(ref->second == key->second)) {
            v.reason = ChainFail::revocation_reference;
            v.detail = "signer " + sim::to_string(signer) + " not introduced";
            return v;
        }
    }

    // full evidence re-execution
    vehicle::VerifyContext ctx{genesis.anchors, genesis.det};
    std::set<Hash256> bundle;
    for (const auto& r : stmt.evidence_bundle) {
        if (!vehicle::verify_report(r, ctx).ok) {
            v.reason = ChainFail::revocation_evidence;
            return v;
        }
        bundle.insert(r.hash());
    }

    // candidates: support resolves inside the bundle and names the suspect
    std::set<scms::PseudonymId> candidate_suspects;
    for (const auto& cand : stmt.candidates) {
        if (cand.support.empty()) {
            v.reason = ChainFail::revocation_candidates;
            return v;
        }
        for (const auto& h : cand.support) {
            if (bundle.count(h) == 0) {
                v.reason = ChainFail::revocation_candidates;
                return v;
            }
        }
        candidate_suspects.insert(cand.suspect);
    }
    for (const auto& cand : stmt.candidates) {
        bool named = false;
        for (const auto& r : stmt.evidence_bundle) {
            if (std::binary_search(r.suspects.begin(), r.suspects.end(), cand.suspect)) {
                named = true;
                break;
            }
        }
        if (!named) {
            v.reason = ChainFail::revocation_candidates;
            return v;
        }
    }

    // decided suspects must be candidates
    for (const auto& p : tx.decided) {
        if (candidate_suspects.count(p) == 0) {
            v.reason = ChainFail::revocation_candidates;
            v.detail = "decided suspect is not a candidate";
            return v;
        }
    }

    v.ok = true;
    v.reason = ChainFail::ok;
    return v;
}

ParticipantView genesis_view(const GenesisConfig& genesis) {
    ParticipantView view;
    for (const auto& pk : genesis.genesis_participants) {
        ParticipantView::Record rec;
        rec.genesis = true;
        view.by_key.emplace(pk, rec);
    }
    return view;
}

} // namespace

TxVerdict validate_tx(const Transaction& tx, const ParticipantView& view,
                      const GenesisConfig& genesis) {
    if (std::holds_alternative<IntroductionTx>(tx))
        return check_intro(std::get<IntroductionTx>(tx), view);
    return check_revocation(std::get<RevocationTx>(tx), view, genesis, derive_groups(genesis));
}

BuildTxResult build_revocation_tx(const rsubft::AggregatedStatement& stmt,
                                  const ParticipantView& view, const GenesisConfig& genesis) {
    BuildTxResult res;

    RevocationTx tx;
    tx.statement = stmt;
    GroupIndex groups = derive_groups(genesis);
    for (const auto& [signer, sig] : stmt.cert.sigs) {
        auto key = groups.rsu_keys.find(signer);
        if (key == groups.rsu_keys.end()) {
            res.error = "unknown signer " + sim::to_string(signer);
            return res;
        }
        auto rec = view.by_key.find(key->second);
        if (rec == view.by_key.end() || rec->second.genesis) {
            res.error = "signer " + sim::to_string(signer) + " not introduced on-chain";
            return res;
        }
        tx.references.push_back(rec->second.intro_tx);
    }
    for (const auto& cand : stmt.candidates) tx.decided.push_back(cand.suspect);
    std::sort(tx.decided.begin(), tx.decided.end());
    tx.decided.erase(std::unique(tx.decided.begin(), tx.decided.end()), tx.decided.end());

    auto verdict = check_revocation(tx, view, genesis, groups);
    if (!verdict.ok) {
        res.error = std::string("statement does not verify: ") + chain_fail_name(verdict.reason);
        return res;
    }
    res.tx = std::move(tx);
    return res;
}

IntroductionTx make_introduction_tx(ParticipantKind kind, sim::NodeId subject_id,
                                    const PublicKey& subject_pk,
                                    std::vector<Approval> approvals) {
    IntroductionTx tx;
    tx.kind = kind;
    tx.subject_id = subject_id;
    tx.subject_pk = subject_pk;
    std::sort(approvals.begin(), approvals.end(),
              [](const Approval& a, const Approval& b) { return a.approver < b.approver; });
    approvals.erase(std::unique(approvals.begin(), approvals.end(),
                                [](const Approval& a, const Approval& b) {
                                    return a.approver == b.approver;
                                }),
                    approvals.end());
    tx.approvals = std::move(approvals);
    return tx;
}

AuditVerdict verify_chain(const std::vector<GlobalBlock>& chain, const GenesisConfig& genesis) {
    AuditVerdict verdict;
    GroupIndex groups = derive_groups(genesis);
    ParticipantView view = genesis_view(genesis);

    Hash256 prev{}; // genesis predecessor: all zeros
    for (std::size_t h = 0; h < chain.size(); h++) {
        const GlobalBlock& b = chain[h];
        auto fail = [&](ChainFail reason, std::size_t tx_index, std::string detail) {
            verdict.ok = false;
            verdict.reason = reason;
            verdict.block_height = h;
            verdict.tx_index = tx_index;
            verdict.detail = std::move(detail);
            return verdict;
        };

        if (b.height != h) return fail(ChainFail::height_sequence, 0, "");
        if (b.prev_hash != prev) return fail(ChainFail::prev_hash, 0, "");
        if (b.compute_pow_hash() != b.pow_hash || !meets_difficulty(b.pow_hash, genesis.difficulty_bits))
            return fail(ChainFail::pow, 0, "");

        // canonical tx order and per-tx validity against strictly earlier state
        Hash256 last_tx{};
        std::vector<std::pair<Hash256, const IntroductionTx*>> introduced_here;
        for (std::size_t i = 0; i < b.txs.size(); i++) {
            const Hash256 th = tx_hash(b.txs[i]);
            if (i > 0 && !(last_tx < th)) return fail(ChainFail::tx_order, i, "");
            last_tx = th;

            TxVerdict tv;
            if (std::holds_alternative<IntroductionTx>(b.txs[i])) {
                const auto& intro = std::get<IntroductionTx>(b.txs[i]);
                tv = check_intro(intro, view);
                // duplicates within the same block
                if (tv.ok) {
                    for (const auto& [eh, e] : introduced_here) {
                        if (e->subject_pk == intro.subject_pk) {
                            tv.ok = false;
                            tv.reason = ChainFail::intro_duplicate;
                            break;
                        }
                    }
                }
                if (tv.ok) introduced_here.emplace_back(th, &intro);
            } else {
                tv = check_revocation(std::get<RevocationTx>(b.txs[i]), view, genesis, groups);
            }
            if (!tv.ok) return fail(tv.reason, i, tv.detail);
        }

        // strictly-earlier rule: introductions activate after their block
        for (const auto& [th, intro] : introduced_here) {
            ParticipantView::Record rec;
            rec.intro_tx = th;
            rec.intro_height = h;
            view.by_key.emplace(intro->subject_pk, rec);
            view.by_intro_tx.emplace(th, intro->subject_pk);
        }
        prev = b.pow_hash;
    }

    verdict.ok = true;
    verdict.reason = ChainFail::ok;
    return verdict;
}

ParticipantView view_of_chain(const std::vector<GlobalBlock>& chain,
                              const GenesisConfig& genesis) {
    ParticipantView view = genesis_view(genesis);
    for (const auto& b : chain) {
        for (const auto& tx : b.txs) {
            if (!std::holds_alternative<IntroductionTx>(tx)) continue;
            const auto& intro = std::get<IntroductionTx>(tx);
            ParticipantView::Record rec;
            rec.intro_tx = tx_hash(tx);
            rec.intro_height = b.height;
            view.by_key.emplace(intro.subject_pk, rec);
            view.by_intro_tx.emplace(rec.intro_tx, intro.subject_pk);
        }
    }
    return view;
}

std::uint64_t total_difficulty(const std::vector<GlobalBlock>& chain,
                               const GenesisConfig& genesis) {
    // fixed difficulty per run: work is blocks * 2^bits
    return chain.size() * (std::uint64_t{1} << std::min<std::uint32_t>(genesis.difficulty_bits, 32));
}

bool chain_preferred(const std::vector<GlobalBlock>& candidate,
                     const std::vector<GlobalBlock>& current, const GenesisConfig& genesis) {
    const std::uint64_t wc = total_difficulty(candidate, genesis);
    const std::uint64_t wk = total_difficulty(current, genesis);
    if (wc != wk) return wc > wk;
    if (candidate.empty() || current.empty()) return false;
    return candidate.back().pow_hash < current.back().pow_hash; // tie: lower tip hash
}

std::vector<std::uint8_t> chain_file_bytes(const std::vector<GlobalBlock>& chain) {
    ByteWriter w;
    for (const auto& b : chain) w.bytes(b.encoded());
    return w.take();
}

void write_chain_file(std::ostream& os, const std::vector<GlobalBlock>& chain) {
    auto bytes = chain_file_bytes(chain);
    os.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
}

ChainParseResult parse_chain_file(const std::vector<std::uint8_t>& bytes) {
    ChainParseResult res;
    try {
        ByteReader r(bytes);
        while (!r.done()) {
            auto block_bytes = r.bytes();
            ByteReader br(block_bytes);
            res.chain.push_back(GlobalBlock::decode(br));
            if (!br.done()) throw DecodeError("trailing bytes inside block record");
        }
        res.ok = true;
    } catch (const DecodeError& e) {
        res.ok = false;
        res.error = e.what();
        res.chain.clear();
    }
    return res;
}

void export_chain_text(std::ostream& os, const std::vector<GlobalBlock>& chain) {
    for (const auto& b : chain) {
        os << "block height=" << b.height << " prev=" << to_hex(b.prev_hash)
           << " pow=" << to_hex(b.pow_hash) << " nonce=" << b.nonce << " txs=" << b.txs.size()
           << '\n';
        for (const auto& tx : b.txs) {
            if (std::holds_alternative<IntroductionTx>(tx)) {
                const auto& i = std::get<IntroductionTx>(tx);
                os << "  intro tx=" << to_hex(tx_hash(tx)) << " subject="
                   << sim::to_string(i.subject_id) << " pk=" << i.subject_pk.y
                   << " approvals=" << i.approvals.size() << '\n';
            } else {
                const auto& r = std::get<RevocationTx>(tx);
                os << "  revocation tx=" << to_hex(tx_hash(tx)) << " group=" << r.statement.group_id
                   << " height=" << r.statement.height << " suspects=";
                for (std::size_t i = 0; i < r.decided.size(); i++)
                    os << (i ? "," : "") << r.decided[i].value;
                os << " reports=" << r.statement.evidence_bundle.size()
                   << " sigs=" << r.statement.cert.sigs.size() << '\n';
            }
        }
    }
}

ApplyOutcome apply_revocations(const GlobalBlock& block, std::vector<scms::ScmsService*>& regions,
                               sim::Tick now) {
    ApplyOutcome out;
    for (const auto& tx : block.txs) {
        if (!std::holds_alternative<RevocationTx>(tx)) continue;
        const auto& rev = std::get<RevocationTx>(tx);
        const Hash256 th = tx_hash(tx);

        for (auto* region : regions) region->register_committed_decision(th, rev.decided);

        for (const auto& suspect : rev.decided) {
            std::optional<scms::LtId> owner;
            for (auto* region : regions) {
                auto res = region->resolve_linkage(suspect, th, now);
                if (res.ok()) {
                    owner = res.lt;
                    if (!region->is_revoked_lt(*owner)) out.newly_revoked.push_back(*owner);
                    region->revoke(*owner, now, th);
                    break;
                }
            }
            if (!owner.has_value()) {
                out.resolution_failures++;
                continue;
            }
            // cross-border effect: every region blacklists the owner
            for (auto* region : regions) region->blacklist(*owner);
        }
    }
    return out;
}

} // namespace blackchain::ledger
