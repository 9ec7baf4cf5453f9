#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "blackchain/rng.hpp"
#include "blackchain/scms/identity.hpp"

namespace blackchain::scms {

enum class IssueError : std::uint8_t {
    blacklisted,
    bad_params,
    unknown_lt,
};

struct IssueResult {
    std::vector<PseudonymWithKey> issued;
    std::optional<IssueError> error;
    bool ok() const { return !error.has_value(); }
};

enum class ResolveError : std::uint8_t {
    unauthorized,
    unknown_pseudonym,
};

struct ResolveResult {
    std::optional<LtId> lt;
    std::optional<ResolveError> error;
    bool ok() const { return lt.has_value(); }
};

struct AuditRow {
    sim::Tick tick = 0;
    std::string event; // "resolve" or "revoke"
    PseudonymId p_id;
    LtId lt_id;
    Hash256 cause_tx;
};

// One logical SCMS per region: ECA/RA/PCA/LA/MA roles folded into a single
// service with internal role separation. Linkage resolution is gated on a
// committed revocation decision registered by the ledger layer; without it
// the lookup refuses, which is the privacy guard of the model.
class ScmsService {
  public:
    ScmsService(std::uint32_t region, Rng& rng);

    std::uint32_t region() const { return region_; }
    const PublicKey& pca_key() const { return pca_.pk; }

    // ECA: long-term enrollment. Throws std::invalid_argument on duplicates.
    LongTermCertificate enroll(sim::NodeId node);

    bool is_enrolled(LtId lt) const { return vehicles_.count(lt) > 0; }

    // RA gate + PCA issuance: extends the holder's pool with windows of
    // `window` ticks, each overlapping its predecessor by `overlap`, until
    // `now + horizon` is covered. Refuses for blacklisted holders.
    IssueResult issue_pseudonyms(LtId lt, sim::Tick now, sim::Tick horizon, sim::Tick window,
                                 sim::Tick overlap);

    // All pseudonyms of `lt` valid at `t`; never more than two.
    // Throws std::invalid_argument for unknown holders.
    std::vector<PseudonymCert> active_pseudonyms(LtId lt, sim::Tick t) const;

    // Ledger layer reports a fully verified, committed revocation decision.
    void register_committed_decision(const Hash256& tx_hash,
                                     const std::vector<PseudonymId>& decided);

    // LA+MA cooperation: maps a pseudonym to its long-term id, but only
    // under a registered committed decision naming that pseudonym.
    ResolveResult resolve_linkage(PseudonymId p, const Hash256& authorization, sim::Tick now);

    // Full-vehicle revocation: marks the long-term id, blacklists it at the
    // RA and revokes every unexpired pseudonym. Idempotent.
    void revoke(LtId lt, sim::Tick now, const Hash256& cause_tx);

    // Cross-region enforcement: blacklist a foreign long-term id so no
    // pseudonyms are ever issued here.
    void blacklist(LtId lt);

    bool is_blacklisted(LtId lt) const { return state_.ra_blacklist.count(lt) > 0; }
    bool is_revoked_lt(LtId lt) const { return state_.revoked_lt.count(lt) > 0; }
    bool is_revoked_pseudonym(PseudonymId p) const {
        return state_.revoked_pseudonyms.count(p) > 0;
    }
    // Tick at which the pseudonym entered the revoked set, if it has.
    std::optional<sim::Tick> revoked_since(PseudonymId p) const {
        auto it = revoked_at_.find(p);
        if (it == revoked_at_.end()) return std::nullopt;
        return it->second;
    }

    const RevocationState& revocation_state() const { return state_; }
    const std::map<LtId, std::vector<Pseudonym>>& pools() const { return pools_; }
    const std::vector<AuditRow>& audit_log() const { return audit_; }

    // tick,event,p_id,lt_id,cause_tx_hash
    void write_audit_csv(std::ostream& os) const;

    std::optional<LtId> owner_of(PseudonymId p) const {
        auto it = owner_by_pseudonym_.find(p);
        if (it == owner_by_pseudonym_.end()) return std::nullopt;
        return it->second;
    }

  private:
    std::uint32_t region_;
    Rng& rng_;
    KeyPair pca_;
    std::uint64_t next_lt_serial_ = 0;
    std::uint64_t next_p_serial_ = 0;

    std::map<LtId, LongTermCertificate> vehicles_;
    std::map<sim::NodeId, LtId> enrolled_nodes_;
    std::map<LtId, std::vector<Pseudonym>> pools_;
    std::map<PseudonymId, LtId> owner_by_pseudonym_; // sealed linkage table (LA view)
    std::map<Hash256, std::set<PseudonymId>> committed_decisions_;
    std::set<std::pair<Hash256, PseudonymId>> resolved_;
    std::map<PseudonymId, sim::Tick> revoked_at_;
    RevocationState state_;
    std::vector<AuditRow> audit_;
};

} // namespace blackchain::scms
