#include <doctest.h>

#include "blackchain/adversary/adversary.hpp"
#include "blackchain/harness/runner.hpp"

using namespace blackchain;
using namespace blackchain::adversary;

namespace {

struct Fixture {
    RngHub hub{61};
    scms::ScmsService scms{0, hub.stream("scms/0")};
    vehicle::VerifyContext ctx;
    std::vector<scms::PseudonymWithKey> creds;

    Fixture() {
        ctx.anchors.pca_keys[0] = scms.pca_key();
        for (std::uint32_t i = 0; i < 3; i++) {
            auto lt = scms.enroll(sim::vehicle_id(i)).lt_id;
            auto issued = scms.issue_pseudonyms(lt, 0, 2000, 600, 100);
            REQUIRE(issued.ok());
            creds.push_back(issued.issued[0]);
        }
    }
};

} // namespace

TEST_CASE("strategy names round-trip") {
    for (Strategy s : {Strategy::false_position, Strategy::bad_mouth, Strategy::sybil_vote,
                       Strategy::byz_rsu_silent, Strategy::byz_rsu_equivocate}) {
        auto parsed = strategy_from_name(strategy_name(s));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == s);
    }
    CHECK_FALSE(strategy_from_name("nonsense").has_value());
}

TEST_CASE("false-position beacons are well-formed at the wire level") {
    Fixture f;
    vehicle::KinematicState truth;
    truth.pos = {100, 100};
    truth.speed = 20;

    auto lie = false_position_beacon(truth, 500, f.creds[0], 10);
    CHECK(vehicle::verify_beacon(lie, f.ctx.anchors)); // correctly signed
    CHECK(lie.state.pos.x == doctest::Approx(600.0));  // but displaced
    CHECK(lie.state.pos.y == doctest::Approx(100.0));

    SUBCASE("offset must be positive") {
        CHECK_THROWS_AS(false_position_beacon(truth, 0, f.creds[0], 10), std::invalid_argument);
    }
}

TEST_CASE("attack onset arithmetic: a 500 m offset at 10 Hz trips speed_bound") {
    Fixture f;
    vehicle::BeaconHistory hist;
    vehicle::KinematicState truth;
    truth.pos = {100, 100};
    truth.speed = 20;

    hist.observe(vehicle::make_beacon(f.creds[0], 10, truth)); // honest beacon
    auto lie = false_position_beacon(truth, 500, f.creds[0], 11);
    auto det = vehicle::detect_misbehavior(hist, lie, f.ctx.det);
    REQUIRE(det.has_value());
    CHECK(det->statement.check == vehicle::CheckKind::speed_bound);
    CHECK(det->statement.computed_value >= 5000.0); // 500 m per 0.1 s
}

TEST_CASE("a sub-threshold offset stays undetected: the stealth bound") {
    Fixture f;
    vehicle::BeaconHistory hist;
    vehicle::KinematicState truth;
    truth.pos = {100, 100};
    truth.speed = 0; // stationary: implied speed equals offset / 0.1 s

    hist.observe(vehicle::make_beacon(f.creds[0], 10, truth));
    // threshold is 77 m/s so 0.5 m in one tick implies 5 m/s: invisible
    auto lie = false_position_beacon(truth, 0.5, f.creds[0], 11);
    CHECK_FALSE(vehicle::detect_misbehavior(hist, lie, f.ctx.det).has_value());
}

TEST_CASE("bad-mouth reports fail verification at every honest validator") {
    Fixture f;
    vehicle::KinematicState k;
    k.pos = {50, 50};
    k.speed = 10;
    auto victim_prev = vehicle::make_beacon(f.creds[1], 10, k);
    k.pos = {51, 50};
    auto victim_cur = vehicle::make_beacon(f.creds[1], 11, k);

    auto report = bad_mouth_report(f.creds[0], victim_prev, victim_cur, 3, 11, f.ctx.det);

    // well-formed at the wire level: signature and closure hold
    CHECK(schnorr::verify(report.reporter_cert.pk, SigDomain::report, report.signed_bytes(),
                          report.sig));
    auto bytes = report.encoded();
    ByteReader r(bytes);
    CHECK_NOTHROW(vehicle::MisbehaviorReport::decode(r));

    // but re-execution exposes the fabricated value
    auto verdict = vehicle::verify_report(report, f.ctx);
    REQUIRE_FALSE(verdict.ok);
    CHECK(verdict.reason == vehicle::ReportFail::reexecution_mismatch);

    SUBCASE("tampering the evidence instead fails at the signature stage") {
        auto tampered = report;
        tampered.evidence[0].state.pos.x += 1000;
        tampered.statements[0].inputs[0] = tampered.evidence[0].hash();
        tampered.sig = schnorr::sign(f.creds[0].sk, f.creds[0].cert.pk, SigDomain::report,
                                     tampered.signed_bytes());
        auto v = vehicle::verify_report(tampered, f.ctx);
        REQUIRE_FALSE(v.ok);
        CHECK(v.reason == vehicle::ReportFail::evidence_beacon);
    }
}

TEST_CASE("bad-mouthing in simulation: the victim is never revoked") {
    harness::ScenarioConfig cfg;
    cfg.seed = 97;
    cfg.ticks = 600;
    cfg.vehicles = 12;
    cfg.world_m = 1000;
    cfg.regions = 2;
    cfg.rsu_positions = {{250, 250}, {750, 250}, {250, 750}, {750, 750}};
    cfg.pow_difficulty_bits = 4;

    AttackProfile attack;
    attack.strategy = Strategy::bad_mouth;
    attack.targets = {0};
    attack.victim = 1;
    attack.start_tick = 50;
    cfg.attacks.push_back(attack);

    harness::Simulation sim(cfg);
    auto result = sim.run();

    CHECK(result.metrics.reports_generated > 0);
    CHECK(result.metrics.reports_excluded > 0); // heads logged the exclusions
    CHECK(result.metrics.false_revocations == 0);
    auto victim_lt = sim.lt_of_vehicle(1);
    auto attacker_lt = sim.lt_of_vehicle(0);
    for (auto* region : sim.region_services()) {
        CHECK_FALSE(region->is_blacklisted(victim_lt));
        CHECK_FALSE(region->is_blacklisted(attacker_lt));
    }
    // nothing bad-mouthed ever reached the chain
    CHECK(result.metrics.revocation_txs == 0);
    // and no committed cluster block admitted a bad-mouth report
    for (const auto& block : sim.committed_cluster_blocks()) {
        for (const auto& r : block.reports)
            CHECK(vehicle::verify_report(r, sim.verify_context()).ok);
    }
}

TEST_CASE("sybil voting in simulation: bounded by the two-pseudonym limit") {
    harness::ScenarioConfig cfg;
    cfg.seed = 98;
    cfg.ticks = 700; // crosses the overlap window at tick 500
    cfg.vehicles = 10;
    cfg.world_m = 600; // dense: clusters of 5+
    cfg.regions = 1;
    cfg.rsu_positions = {{300, 300}};
    cfg.pow_difficulty_bits = 0;

    AttackProfile attack;
    attack.strategy = Strategy::sybil_vote;
    attack.targets = {0};
    cfg.attacks.push_back(attack);

    harness::Simulation sim(cfg);
    auto result = sim.run();

    auto attacker_lt = sim.lt_of_vehicle(0);
    std::size_t max_per_lt = 0;
    for (const auto& block : sim.committed_cluster_blocks()) {
        auto counts = sim.endorsements_per_lt(block);
        for (const auto& [lt, n] : counts) {
            CHECK(n <= 2); // ground-truth Sybil bound
            if (lt == attacker_lt) max_per_lt = std::max(max_per_lt, n);
        }
        // a cluster of five or more cannot be carried by one vehicle alone
        if (block.member_count() >= 5) {
            auto counts2 = sim.endorsements_per_lt(block);
            for (const auto& [lt, n] : counts2)
                CHECK(n < cluster::quorum_size(block.member_count()));
        }
    }
    CHECK(result.metrics.false_revocations == 0);
    for (auto* region : sim.region_services()) CHECK_FALSE(region->is_blacklisted(attacker_lt));
}

TEST_CASE("colluding sybils can commit locally but are caught at RSU validation") {
    // five-member cluster: one honest vehicle and two colluders with two
    // overlapping pseudonyms each. Four endorsements beat the quorum of
    // three, so a block carrying a fabricated report commits locally; the
    // RSU's independent re-execution still rejects it.
    RngHub hub(71);
    scms::ScmsService scms(0, hub.stream("scms/0"));
    vehicle::VerifyContext ctx;
    ctx.anchors.pca_keys[0] = scms.pca_key();

    auto issue_two = [&](std::uint32_t node) {
        auto lt = scms.enroll(sim::vehicle_id(node)).lt_id;
        auto res = scms.issue_pseudonyms(lt, 0, 700, 600, 100);
        REQUIRE(res.ok());
        REQUIRE(res.issued.size() >= 2);
        return std::make_pair(res.issued[0], res.issued[1]);
    };
    auto [a1, a2] = issue_two(0); // colluder A
    auto [b1, b2] = issue_two(1); // colluder B
    auto honest_lt = scms.enroll(sim::vehicle_id(2)).lt_id;
    auto honest = scms.issue_pseudonyms(honest_lt, 0, 700, 600, 100).issued[0];

    // victim beacons to bad-mouth
    auto victim_lt = scms.enroll(sim::vehicle_id(3)).lt_id;
    auto victim = scms.issue_pseudonyms(victim_lt, 0, 700, 600, 100).issued[0];
    vehicle::KinematicState k;
    auto vb1 = vehicle::make_beacon(victim, 550, k);
    k.pos = {2, 0};
    auto vb2 = vehicle::make_beacon(victim, 551, k);
    auto bad = adversary::bad_mouth_report(a1, vb1, vb2, 9, 551, ctx.det);

    cluster::ClusterBlock block;
    block.cluster_id = 9;
    block.tick = 551; // inside the overlap window of both colluders
    for (const auto& cred : {a1, a2, b1, b2, honest}) block.member_certs.push_back(cred.cert);
    std::sort(block.member_certs.begin(), block.member_certs.end(),
              [](const auto& x, const auto& y) { return x.p_id < y.p_id; });
    block.reports.push_back(bad);
    cluster::RevocationTally tally;
    tally.suspect = victim.cert.p_id;
    tally.voters = {a1.cert.p_id, a2.cert.p_id, b1.cert.p_id, b2.cert.p_id};
    std::sort(tally.voters.begin(), tally.voters.end());
    block.revocation_votes.push_back(tally);

    const Hash256 ch = block.candidate_hash();
    for (const auto& cred : {a1, a2, b1, b2}) {
        cluster::Endorsement e;
        e.voter = cred.cert;
        e.sig = cluster::sign_endorsement(cred, ch);
        block.endorsements.push_back(e);
    }
    std::sort(block.endorsements.begin(), block.endorsements.end(),
              [](const auto& x, const auto& y) { return x.voter.p_id < y.voter.p_id; });

    // the local attack succeeds: 4 of 5 endorsements, local decision flips
    CHECK(cluster::has_commit_quorum(block));
    CHECK(cluster::local_revocation_decision(block, victim.cert.p_id));

    // and the escalation is stopped exactly at the RSU
    auto verdict = rsubft::validate_cluster_block(
        block, ctx, [](scms::PseudonymId, sim::Tick) { return false; }, std::nullopt);
    REQUIRE_FALSE(verdict.ok);
    CHECK(verdict.reason == rsubft::BlockFail::report_invalid);

    // even if the report were dropped and only votes remained, aggregation
    // yields no candidate without verified supporting evidence
    auto stripped = block;
    stripped.reports.clear();
    auto stmt = rsubft::aggregate(1, 0, {stripped});
    CHECK(stmt.candidates.empty());
}

TEST_CASE("no adversary strategy produces a false revocation") {
    // one run with every vehicle-level strategy active at once
    harness::ScenarioConfig cfg;
    cfg.seed = 99;
    cfg.ticks = 800;
    cfg.vehicles = 15;
    cfg.world_m = 1200;
    cfg.regions = 2;
    cfg.rsu_positions = {{300, 300}, {900, 300}, {300, 900}, {900, 900}};
    cfg.pow_difficulty_bits = 4;

    AttackProfile fp;
    fp.strategy = Strategy::false_position;
    fp.targets = {0};
    fp.offset_m = 500;
    fp.start_tick = 100;
    cfg.attacks.push_back(fp);
    AttackProfile bm;
    bm.strategy = Strategy::bad_mouth;
    bm.targets = {1};
    bm.victim = 2;
    bm.start_tick = 50;
    cfg.attacks.push_back(bm);
    AttackProfile sv;
    sv.strategy = Strategy::sybil_vote;
    sv.targets = {3};
    cfg.attacks.push_back(sv);

    harness::Simulation sim(cfg);
    auto result = sim.run();

    // ground truth: only the false-data emitter may end up blacklisted
    CHECK(result.metrics.false_revocations == 0);
    for (auto* region : sim.region_services()) {
        CHECK_FALSE(region->is_blacklisted(sim.lt_of_vehicle(1)));
        CHECK_FALSE(region->is_blacklisted(sim.lt_of_vehicle(2)));
        CHECK_FALSE(region->is_blacklisted(sim.lt_of_vehicle(3)));
    }
}
