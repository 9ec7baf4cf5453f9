#include <doctest.h>

#include <cmath>

#include "blackchain/rng.hpp"
#include "blackchain/scms/scms.hpp"
#include "blackchain/vehicle/mobility.hpp"
#include "blackchain/vehicle/report.hpp"

using namespace blackchain;
using namespace blackchain::vehicle;

namespace {

// one region, a few credentialed vehicles, shared anchors
struct Fixture {
    RngHub hub{42};
    scms::ScmsService scms{0, hub.stream("scms/0")};
    VerifyContext ctx;
    std::vector<scms::PseudonymWithKey> creds;

    Fixture() {
        ctx.anchors.pca_keys[0] = scms.pca_key();
        for (std::uint32_t i = 0; i < 4; i++) {
            auto lt = scms.enroll(sim::vehicle_id(i)).lt_id;
            auto issued = scms.issue_pseudonyms(lt, 0, 5000, 600, 100);
            REQUIRE(issued.ok());
            creds.push_back(issued.issued[0]);
        }
    }

    Beacon beacon_at(std::size_t who, sim::Tick t, double x, double y, double speed = 10,
                     double heading = 0) {
        KinematicState k;
        k.pos = {x, y};
        k.speed = speed;
        k.heading = heading;
        return make_beacon(creds[who], t, k);
    }
};

} // namespace

TEST_CASE("straight-line kinematics: 10 m/s for 10 ticks advances 10 m") {
    MobilityParams p;
    p.accel_max = 0;
    p.turn_max = 0;
    Rng rng(1, "mob");
    KinematicState k;
    k.pos = {100, 100};
    k.speed = 10;
    k.heading = 0;
    auto next = step_mobility(k, 10, rng, p);
    CHECK(next.pos.x == doctest::Approx(110.0));
    CHECK(next.pos.y == doctest::Approx(100.0));
}

TEST_CASE("speed clamps at v_max under positive perturbation") {
    MobilityParams p;
    p.v_max = 70;
    p.accel_max = 1000; // guarantee saturation either way
    p.turn_max = 0;
    Rng rng(2, "mob");
    KinematicState k;
    k.pos = {500, 500};
    k.speed = 69.9;
    k.heading = 0;
    for (int i = 0; i < 50; i++) {
        k = step_mobility(k, 1, rng, p);
        CHECK(k.speed >= 0);
        CHECK(k.speed <= p.v_max);
    }
}

TEST_CASE("mobility invariants hold over a long walk") {
    MobilityParams p;
    Rng rng(3, "mob");
    KinematicState k;
    k.pos = {1000, 1000};
    k.speed = 15;
    k.heading = 1.0;
    for (int i = 0; i < 1000; i++) {
        auto next = step_mobility(k, 1, rng, p);
        CHECK(next.speed >= 0);
        CHECK(next.speed <= p.v_max);
        CHECK(next.heading >= 0);
        CHECK(next.heading < 2 * 3.14159265358979 + 1e-9);
        CHECK(next.pos.x >= 0);
        CHECK(next.pos.x <= p.world_w);
        CHECK(next.pos.y >= 0);
        CHECK(next.pos.y <= p.world_h);
        // straight-line displacement bounded by speed * dt
        CHECK(sim::distance(k.pos, next.pos) <= k.speed * 0.1 + 1e-9);
        k = next;
    }
    CHECK(std::isfinite(k.pos.x));
    CHECK(std::isfinite(k.pos.y));
}

TEST_CASE("mobility rejects dt = 0") {
    MobilityParams p;
    Rng rng(4, "mob");
    CHECK_THROWS_AS(step_mobility(KinematicState{}, 0, rng, p), std::invalid_argument);
}

TEST_CASE("beacon signing and verification") {
    Fixture f;
    auto b = f.beacon_at(0, 10, 100, 100);
    CHECK(verify_beacon(b, f.ctx.anchors));

    SUBCASE("one flipped content byte kills the signature") {
        b.state.pos.x += 1;
        CHECK_FALSE(verify_beacon_signature(b));
    }
    SUBCASE("beacon outside the cert window fails") {
        auto late = make_beacon(f.creds[0], 100000, b.state);
        CHECK_FALSE(verify_beacon(late, f.ctx.anchors));
    }
    SUBCASE("encode/decode round-trips and preserves the hash") {
        auto bytes = b.encoded();
        ByteReader r(bytes);
        auto back = Beacon::decode(r);
        CHECK(back.hash() == b.hash());
        CHECK(verify_beacon(back, f.ctx.anchors));
    }
}

TEST_CASE("speed_bound fires on an implausible jump") {
    Fixture f;
    BeaconHistory hist;
    hist.observe(f.beacon_at(0, 10, 0, 0));
    auto incoming = f.beacon_at(0, 11, 200, 0); // 200 m in 0.1 s = 2000 m/s

    auto det = detect_misbehavior(hist, incoming, f.ctx.det);
    REQUIRE(det.has_value());
    CHECK(det->statement.check == CheckKind::speed_bound);
    CHECK(det->statement.computed_value == doctest::Approx(2000.0));
    CHECK(det->statement.threshold == doctest::Approx(77.0)); // 70 * 1.1
    CHECK(det->statement.suspect == f.creds[0].cert.p_id);
    REQUIRE(det->evidence.size() == 2);

    // re-execution reproduces the statement exactly
    auto re = re_execute_statement(det->statement, det->evidence, f.ctx.det);
    CHECK(re.ok);
}

TEST_CASE("teleport is the backstop when the speed tolerance is loose") {
    Fixture f;
    BeaconHistory hist;
    hist.observe(f.beacon_at(0, 0, 0, 0));
    // with tol = 10 the speed threshold is 770 m/s; a 50 m hop in one tick
    // implies 500 m/s (under it) but is still far beyond v_max*dt + slack
    DetectionParams det = f.ctx.det;
    det.tol = 10.0;
    det.jump_slack = 5.0;
    auto incoming = f.beacon_at(0, 1, 50, 0);
    auto d = detect_misbehavior(hist, incoming, det);
    REQUIRE(d.has_value());
    CHECK(d->statement.check == CheckKind::teleport);
    CHECK(d->statement.computed_value == doctest::Approx(50.0));
    CHECK(d->statement.threshold == doctest::Approx(70.0 * 0.1 + 5.0));
    CHECK(re_execute_statement(d->statement, d->evidence, det).ok);
}

TEST_CASE("beacon_rate fires on two beacons in one tick") {
    Fixture f;
    BeaconHistory hist;
    auto first = f.beacon_at(0, 5, 0, 0);
    hist.observe(first);
    auto second = f.beacon_at(0, 5, 3, 0);

    auto det = detect_misbehavior(hist, second, f.ctx.det);
    REQUIRE(det.has_value());
    CHECK(det->statement.check == CheckKind::beacon_rate);
    CHECK(det->statement.computed_value == 2.0);
    CHECK(det->statement.threshold == 1.0);
    CHECK(re_execute_statement(det->statement, det->evidence, f.ctx.det).ok);

    SUBCASE("replayed identical beacon does not fire") {
        auto dup = detect_misbehavior(hist, first, f.ctx.det);
        CHECK_FALSE(dup.has_value());
    }
}

TEST_CASE("first-ever beacon from a pseudonym never fires") {
    Fixture f;
    BeaconHistory hist;
    auto det = detect_misbehavior(hist, f.beacon_at(0, 10, 0, 0), f.ctx.det);
    CHECK_FALSE(det.has_value());
}

TEST_CASE("honest straight-line traffic never fires over a full run") {
    Fixture f;
    BeaconHistory hist;
    MobilityParams mp;
    Rng rng(9, "honest");
    KinematicState k;
    k.pos = {500, 500};
    k.speed = 30;
    k.heading = 0.7;
    for (sim::Tick t = 0; t < 500; t++) {
        auto b = make_beacon(f.creds[1], t, k);
        auto det = detect_misbehavior(hist, b, f.ctx.det);
        CHECK_FALSE(det.has_value());
        hist.observe(b);
        k = step_mobility(k, 1, rng, mp);
    }
}

TEST_CASE("report building") {
    Fixture f;
    BeaconHistory hist;
    hist.observe(f.beacon_at(0, 10, 0, 0));
    auto det = detect_misbehavior(hist, f.beacon_at(0, 11, 200, 0), f.ctx.det);
    REQUIRE(det.has_value());

    SUBCASE("one statement, two evidence beacons, one suspect") {
        auto res = build_report({det->statement}, det->evidence, f.creds[1], 77, 11);
        REQUIRE(res.ok());
        CHECK(res.report->suspects.size() == 1);
        CHECK(res.report->suspects[0] == f.creds[0].cert.p_id);
        CHECK(res.report->evidence.size() == 2);
        CHECK(res.report->cluster_id == 77);
        CHECK(verify_report(*res.report, f.ctx).ok);
    }
    SUBCASE("missing evidence is a closure error") {
        auto res = build_report({det->statement}, {det->evidence[0]}, f.creds[1], 77, 11);
        REQUIRE_FALSE(res.ok());
        CHECK(res.fail == ReportFail::evidence_closure);
    }
    SUBCASE("empty statements are rejected") {
        auto res = build_report({}, det->evidence, f.creds[1], 77, 11);
        REQUIRE_FALSE(res.ok());
        CHECK(res.fail == ReportFail::empty_statements);
    }
    SUBCASE("suspects are deduplicated and sorted") {
        // three statements about two suspects
        BeaconHistory h2;
        h2.observe(f.beacon_at(2, 10, 0, 0));
        auto det2 = detect_misbehavior(h2, f.beacon_at(2, 11, 300, 0), f.ctx.det);
        REQUIRE(det2.has_value());

        auto evidence = det->evidence;
        evidence.insert(evidence.end(), det2->evidence.begin(), det2->evidence.end());
        auto res = build_report({det->statement, det2->statement, det->statement}, evidence,
                                f.creds[1], 0, 11);
        REQUIRE(res.ok());
        CHECK(res.report->suspects.size() == 2);
        CHECK(res.report->suspects[0] < res.report->suspects[1]);
        CHECK(verify_report(*res.report, f.ctx).ok);
    }
}

TEST_CASE("report verification catches tampering and fabrication") {
    Fixture f;
    BeaconHistory hist;
    hist.observe(f.beacon_at(0, 10, 0, 0));
    auto det = detect_misbehavior(hist, f.beacon_at(0, 11, 200, 0), f.ctx.det);
    REQUIRE(det.has_value());
    auto res = build_report({det->statement}, det->evidence, f.creds[1], 0, 11);
    REQUIRE(res.ok());
    const auto& honest = *res.report;
    CHECK(verify_report(honest, f.ctx).ok);

    SUBCASE("mutating an evidence beacon is caught") {
        auto bad = honest;
        bad.evidence[0].meta.push_back(0x00); // one added byte
        auto v = verify_report(bad, f.ctx);
        CHECK_FALSE(v.ok);
    }
    SUBCASE("fabricated computed_value fails re-execution: bad-mouthing defense") {
        auto bad = honest;
        bad.statements[0].computed_value = 99999.0;
        // re-sign so only the fabrication can fail
        bad.sig = schnorr::sign(f.creds[1].sk, f.creds[1].cert.pk, SigDomain::report,
                                bad.signed_bytes());
        auto v = verify_report(bad, f.ctx);
        REQUIRE_FALSE(v.ok);
        CHECK(v.reason == ReportFail::reexecution_mismatch);
    }
    SUBCASE("fabricated threshold fails re-execution") {
        auto bad = honest;
        bad.statements[0].threshold = 0.001;
        bad.sig = schnorr::sign(f.creds[1].sk, f.creds[1].cert.pk, SigDomain::report,
                                bad.signed_bytes());
        CHECK_FALSE(verify_report(bad, f.ctx).ok);
    }
    SUBCASE("tampered reporter signature is caught") {
        auto bad = honest;
        bad.sig.s ^= 1;
        auto v = verify_report(bad, f.ctx);
        REQUIRE_FALSE(v.ok);
        CHECK(v.reason == ReportFail::reporter_signature);
    }
    SUBCASE("wrong suspects list is caught") {
        auto bad = honest;
        bad.suspects.push_back(scms::PseudonymId{123456});
        bad.sig = schnorr::sign(f.creds[1].sk, f.creds[1].cert.pk, SigDomain::report,
                                bad.signed_bytes());
        auto v = verify_report(bad, f.ctx);
        REQUIRE_FALSE(v.ok);
        CHECK(v.reason == ReportFail::suspects_mismatch);
    }
    SUBCASE("encode/decode round-trip preserves verdict and hash") {
        auto bytes = honest.encoded();
        ByteReader r(bytes);
        auto back = MisbehaviorReport::decode(r);
        CHECK(back.hash() == honest.hash());
        CHECK(verify_report(back, f.ctx).ok);
    }
}

TEST_CASE("detection re-execution determinism over random pipelines") {
    Fixture f;
    Rng rng(55, "pipeline");
    for (int trial = 0; trial < 30; trial++) {
        BeaconHistory hist;
        double x = rng.uniform(0, 100);
        hist.observe(f.beacon_at(3, 10, x, 0));
        // jump large enough to always fire speed_bound
        auto incoming = f.beacon_at(3, 11, x + rng.uniform(100, 2000), 0);
        auto det = detect_misbehavior(hist, incoming, f.ctx.det);
        REQUIRE(det.has_value());
        auto res = build_report({det->statement}, det->evidence, f.creds[1], 0, 11);
        REQUIRE(res.ok());
        CHECK(verify_report(*res.report, f.ctx).ok);
    }
}
