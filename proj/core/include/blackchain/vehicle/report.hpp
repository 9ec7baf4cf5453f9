#pragma once

#include <optional>
#include <vector>

#include "blackchain/vehicle/detection.hpp"

namespace blackchain::vehicle {

enum class ReportFail : std::uint8_t {
    ok = 0,
    empty_statements,
    evidence_closure,     // a statement references a beacon not in evidence
    evidence_beacon,      // evidence beacon signature/cert/window invalid
    reporter_cert,        // reporter cert invalid or not valid at report tick
    reporter_signature,
    reexecution_mismatch, // statement does not reproduce under re-execution
    suspects_mismatch,    // suspects list is not the sorted distinct statement suspects
};

const char* report_fail_name(ReportFail f);

// Misbehavior report: suspects, re-executable trust statements, reporter
// pseudonym, cluster context and the full signed beacons used as evidence.
struct MisbehaviorReport {
    std::vector<scms::PseudonymId> suspects; // sorted, distinct
    std::vector<TrustStatement> statements;
    scms::PseudonymCert reporter_cert;
    std::uint64_t cluster_id = 0;
    sim::Tick tick = 0;
    std::vector<Beacon> evidence; // sorted by beacon hash, distinct
    Signature sig;

    scms::PseudonymId reporter_p_id() const { return reporter_cert.p_id; }

    std::vector<std::uint8_t> signed_bytes() const;
    void encode(ByteWriter& w) const;
    static MisbehaviorReport decode(ByteReader& r);
    std::vector<std::uint8_t> encoded() const {
        ByteWriter w;
        encode(w);
        return w.take();
    }
    Hash256 hash() const;
};

// Everything a validator needs; identical at cluster members, RSUs, MAs and
// the offline auditor.
struct VerifyContext {
    scms::TrustAnchors anchors;
    DetectionParams det;
};

struct BuildReportResult {
    std::optional<MisbehaviorReport> report;
    ReportFail fail = ReportFail::ok;
    bool ok() const { return report.has_value(); }
};

// Assembles and signs a report. Fails if statements are empty or evidence
// does not cover every referenced beacon hash.
BuildReportResult build_report(std::vector<TrustStatement> statements,
                               std::vector<Beacon> evidence,
                               const scms::PseudonymWithKey& reporter,
                               std::uint64_t cluster_id, sim::Tick tick);

struct ReportVerdict {
    bool ok = false;
    ReportFail reason = ReportFail::ok;
};

// Pure re-validation. Every layer (cluster member, RSU, MA, auditor) runs
// exactly this: evidence closure, beacon signatures and certs, statement
// re-execution against system detection parameters, suspects consistency,
// reporter cert validity at the report tick, reporter signature.
ReportVerdict verify_report(const MisbehaviorReport& r, const VerifyContext& ctx);

} // namespace blackchain::vehicle
