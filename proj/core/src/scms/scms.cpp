#include "blackchain/scms/scms.hpp"

#include <algorithm>
#include <stdexcept>

#include "blackchain/sha256.hpp"

namespace blackchain::scms {

namespace {

std::uint64_t derive_id(const char* tag, std::uint32_t region, std::uint64_t serial) {
    ByteWriter w;
    w.str(tag);
    w.u32(region);
    w.u64(serial);
    return fold64(sha256(w.data()));
}

} // namespace

ScmsService::ScmsService(std::uint32_t region, Rng& rng) : region_(region), rng_(rng) {
    pca_ = schnorr::keypair_from_seed(rng_.next_u64());
}

LongTermCertificate ScmsService::enroll(sim::NodeId node) {
    if (enrolled_nodes_.count(node) > 0)
        throw std::invalid_argument("node already enrolled: " + sim::to_string(node));
    LongTermCertificate cert;
    cert.holder = node;
    cert.lt_id = LtId{derive_id("lt", region_, next_lt_serial_++)};
    cert.pk = schnorr::keypair_from_seed(rng_.next_u64()).pk;
    cert.revoked = false;
    vehicles_.emplace(cert.lt_id, cert);
    enrolled_nodes_.emplace(node, cert.lt_id);
    pools_.emplace(cert.lt_id, std::vector<Pseudonym>{});
    return cert;
}

IssueResult ScmsService::issue_pseudonyms(LtId lt, sim::Tick now, sim::Tick horizon,
                                          sim::Tick window, sim::Tick overlap) {
    IssueResult res;
    // window > 2*overlap keeps the at-most-two-active invariant: with
    // inclusive windows starting every (window - overlap) ticks, a third
    // window would otherwise open before the first closes.
    if (overlap == 0 || window <= 2 * overlap) {
        res.error = IssueError::bad_params;
        return res;
    }
    if (vehicles_.count(lt) == 0) {
        res.error = IssueError::unknown_lt;
        return res;
    }
    if (state_.ra_blacklist.count(lt) > 0) {
        res.error = IssueError::blacklisted; // the revocation enforcement point
        return res;
    }

    auto& pool = pools_[lt];
    // continue from the last issued window, or start at `now`
    sim::Tick next_from = now;
    if (!pool.empty()) {
        const auto& last = pool.back().cert;
        next_from = std::max(next_from, last.valid_to - overlap);
    }

    const sim::Tick cover_until = now + horizon;
    while (pool.empty() || pool.back().cert.valid_to < cover_until) {
        KeyPair kp = schnorr::keypair_from_seed(rng_.next_u64());
        PseudonymCert cert;
        cert.p_id = PseudonymId{derive_id("pseudonym", region_, next_p_serial_++)};
        cert.pk = kp.pk;
        cert.valid_from = next_from;
        cert.valid_to = next_from + window;
        cert.region = region_;
        cert.pca_sig = schnorr::sign(pca_.sk, pca_.pk, SigDomain::pca_cert, cert.signed_bytes());

        Pseudonym p;
        p.cert = cert;
        p.linkage_token = derive_id("linkage", region_, cert.p_id.value);
        pool.push_back(p);
        owner_by_pseudonym_.emplace(cert.p_id, lt);
        res.issued.push_back(PseudonymWithKey{cert, kp.sk});

        next_from = cert.valid_to - overlap;
    }
    return res;
}

std::vector<PseudonymCert> ScmsService::active_pseudonyms(LtId lt, sim::Tick t) const {
    auto it = pools_.find(lt);
    if (it == pools_.end()) throw std::invalid_argument("unknown lt_id");
    std::vector<PseudonymCert> active;
    for (const auto& p : it->second) {
        if (p.cert.valid_at(t)) active.push_back(p.cert);
    }
    return active;
}

void ScmsService::register_committed_decision(const Hash256& tx_hash,
                                              const std::vector<PseudonymId>& decided) {
    auto& set = committed_decisions_[tx_hash];
    set.insert(decided.begin(), decided.end());
}

ResolveResult ScmsService::resolve_linkage(PseudonymId p, const Hash256& authorization,
                                           sim::Tick now) {
    ResolveResult res;
    auto dec = committed_decisions_.find(authorization);
    if (dec == committed_decisions_.end() || dec->second.count(p) == 0) {
        res.error = ResolveError::unauthorized;
        return res;
    }
    auto owner = owner_by_pseudonym_.find(p);
    if (owner == owner_by_pseudonym_.end()) {
        res.error = ResolveError::unknown_pseudonym;
        return res;
    }
    res.lt = owner->second;
    // re-applying the same committed decision does not duplicate audit rows
    if (resolved_.insert({authorization, p}).second)
        audit_.push_back(AuditRow{now, "resolve", p, owner->second, authorization});
    return res;
}

void ScmsService::revoke(LtId lt, sim::Tick now, const Hash256& cause_tx) {
    state_.ra_blacklist.insert(lt);
    state_.revoked_lt.insert(lt);
    auto v = vehicles_.find(lt);
    if (v != vehicles_.end()) v->second.revoked = true;
    auto pool = pools_.find(lt);
    if (pool != pools_.end()) {
        for (const auto& p : pool->second) {
            if (p.cert.valid_to >= now) {
                bool fresh = state_.revoked_pseudonyms.insert(p.cert.p_id).second;
                if (fresh) {
                    revoked_at_.emplace(p.cert.p_id, now);
                    audit_.push_back(AuditRow{now, "revoke", p.cert.p_id, lt, cause_tx});
                }
            }
        }
    }
}

void ScmsService::blacklist(LtId lt) { state_.ra_blacklist.insert(lt); }

void ScmsService::write_audit_csv(std::ostream& os) const {
    os << "tick,p_id,lt_id,cause_tx_hash\n";
    for (const auto& row : audit_) {
        os << row.tick << ',' << row.p_id.value << ',' << row.lt_id.value << ','
           << to_hex(row.cause_tx) << '\n';
    }
}

} // namespace blackchain::scms
