#include "blackchain/vehicle/report.hpp"

#include <algorithm>
#include <map>

#include "blackchain/sha256.hpp"

namespace blackchain::vehicle {

const char* report_fail_name(ReportFail f) {
    switch (f) {
        case ReportFail::ok: return "ok";
        case ReportFail::empty_statements: return "empty_statements";
        case ReportFail::evidence_closure: return "evidence_closure";
        case ReportFail::evidence_beacon: return "evidence_beacon";
        case ReportFail::reporter_cert: return "reporter_cert";
        case ReportFail::reporter_signature: return "reporter_signature";
        case ReportFail::reexecution_mismatch: return "reexecution_mismatch";
        case ReportFail::suspects_mismatch: return "suspects_mismatch";
    }
    return "?";
}

std::vector<std::uint8_t> MisbehaviorReport::signed_bytes() const {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(suspects.size()));
    for (const auto& s : suspects) w.u64(s.value);
    w.u32(static_cast<std::uint32_t>(statements.size()));
    for (const auto& st : statements) st.encode(w);
    reporter_cert.encode(w);
    w.u64(cluster_id);
    w.u64(tick);
    w.u32(static_cast<std::uint32_t>(evidence.size()));
    for (const auto& b : evidence) b.encode(w);
    return w.take();
}

void MisbehaviorReport::encode(ByteWriter& w) const {
    auto body = signed_bytes();
    w.raw(body.data(), body.size());
    w.u64(sig.e);
    w.u64(sig.s);
}

MisbehaviorReport MisbehaviorReport::decode(ByteReader& r) {
    MisbehaviorReport rep;
    std::uint32_t ns = r.u32();
    rep.suspects.reserve(ns);
    for (std::uint32_t i = 0; i < ns; i++) rep.suspects.push_back(scms::PseudonymId{r.u64()});
    std::uint32_t nst = r.u32();
    rep.statements.reserve(nst);
    for (std::uint32_t i = 0; i < nst; i++) rep.statements.push_back(TrustStatement::decode(r));
    rep.reporter_cert = scms::PseudonymCert::decode(r);
    rep.cluster_id = r.u64();
    rep.tick = r.u64();
    std::uint32_t ne = r.u32();
    rep.evidence.reserve(ne);
    for (std::uint32_t i = 0; i < ne; i++) rep.evidence.push_back(Beacon::decode(r));
    rep.sig.e = r.u64();
    rep.sig.s = r.u64();
    return rep;
}

Hash256 MisbehaviorReport::hash() const { return sha256(encoded()); }

BuildReportResult build_report(std::vector<TrustStatement> statements,
                               std::vector<Beacon> evidence,
                               const scms::PseudonymWithKey& reporter,
                               std::uint64_t cluster_id, sim::Tick tick) {
    BuildReportResult res;
    if (statements.empty()) {
        res.fail = ReportFail::empty_statements;
        return res;
    }

    // deduplicate evidence and sort by hash
    std::map<Hash256, Beacon> by_hash;
    for (auto& b : evidence) by_hash.emplace(b.hash(), std::move(b));

    // closure: every referenced input must be present
    for (const auto& st : statements) {
        for (const auto& h : st.inputs) {
            if (by_hash.count(h) == 0) {
                res.fail = ReportFail::evidence_closure;
                return res;
            }
        }
    }

    MisbehaviorReport r;
    for (const auto& st : statements) r.suspects.push_back(st.suspect);
    std::sort(r.suspects.begin(), r.suspects.end());
    r.suspects.erase(std::unique(r.suspects.begin(), r.suspects.end()), r.suspects.end());
    r.statements = std::move(statements);
    r.reporter_cert = reporter.cert;
    r.cluster_id = cluster_id;
    r.tick = tick;
    for (auto& [h, b] : by_hash) r.evidence.push_back(std::move(b));
    r.sig = schnorr::sign(reporter.sk, reporter.cert.pk, SigDomain::report, r.signed_bytes());

    res.report = std::move(r);
    return res;
}

ReportVerdict verify_report(const MisbehaviorReport& r, const VerifyContext& ctx) {
    auto fail = [](ReportFail f) { return ReportVerdict{false, f}; };

    if (r.statements.empty()) return fail(ReportFail::empty_statements);

    // evidence beacons must be individually valid
    std::map<Hash256, const Beacon*> by_hash;
    for (const auto& b : r.evidence) {
        if (!verify_beacon(b, ctx.anchors)) return fail(ReportFail::evidence_beacon);
        by_hash.emplace(b.hash(), &b);
    }

    // closure + re-execution
    std::vector<scms::PseudonymId> expected_suspects;
    for (const auto& st : r.statements) {
        std::vector<Beacon> inputs;
        inputs.reserve(st.inputs.size());
        for (const auto& h : st.inputs) {
            auto it = by_hash.find(h);
            if (it == by_hash.end()) return fail(ReportFail::evidence_closure);
            inputs.push_back(*it->second);
        }
        ReExecResult re = re_execute_statement(st, inputs, ctx.det);
        if (!re.ok) return fail(ReportFail::reexecution_mismatch);
        expected_suspects.push_back(st.suspect);
    }

    std::sort(expected_suspects.begin(), expected_suspects.end());
    expected_suspects.erase(std::unique(expected_suspects.begin(), expected_suspects.end()),
                            expected_suspects.end());
    if (expected_suspects != r.suspects) return fail(ReportFail::suspects_mismatch);

    if (!ctx.anchors.verify_cert(r.reporter_cert) || !r.reporter_cert.valid_at(r.tick))
        return fail(ReportFail::reporter_cert);
    if (!schnorr::verify(r.reporter_cert.pk, SigDomain::report, r.signed_bytes(), r.sig))
        return fail(ReportFail::reporter_signature);

    return ReportVerdict{true, ReportFail::ok};
}

} // namespace blackchain::vehicle
