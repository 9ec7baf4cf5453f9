#include <doctest.h>

#include <set>

#include "blackchain/scms/scms.hpp"
#include "blackchain/sha256.hpp"

using namespace blackchain;
using namespace blackchain::scms;

namespace {

struct Fixture {
    RngHub hub{101};
    ScmsService scms{0, hub.stream("scms/0")};
};

Hash256 fake_tx(std::uint8_t b) {
    Hash256 h;
    h.bytes[0] = b;
    return h;
}

} // namespace

TEST_CASE("enrollment issues unique long-term ids") {
    Fixture f;
    auto cert = f.scms.enroll(sim::vehicle_id(7));
    CHECK(cert.lt_id.value != 0);
    CHECK_FALSE(cert.revoked);

    SUBCASE("duplicate enrollment is rejected") {
        CHECK_THROWS_AS(f.scms.enroll(sim::vehicle_id(7)), std::invalid_argument);
    }
    SUBCASE("one hundred enrollments give one hundred distinct ids") {
        std::set<LtId> ids{cert.lt_id};
        for (std::uint32_t i = 0; i < 100; i++) {
            if (i == 7) continue;
            ids.insert(f.scms.enroll(sim::vehicle_id(i)).lt_id);
        }
        CHECK(ids.size() == 100);
    }
}

TEST_CASE("pseudonym issuance covers the horizon with overlapping windows") {
    Fixture f;
    auto lt = f.scms.enroll(sim::vehicle_id(0)).lt_id;
    auto res = f.scms.issue_pseudonyms(lt, 0, 1100, 600, 100);
    REQUIRE(res.ok());
    REQUIRE(res.issued.size() == 2);
    CHECK(res.issued[0].cert.valid_from == 0);
    CHECK(res.issued[0].cert.valid_to == 600);
    CHECK(res.issued[1].cert.valid_from == 500);
    CHECK(res.issued[1].cert.valid_to == 1100);

    // oracle: count active windows per tick by direct interval arithmetic
    for (sim::Tick t = 0; t <= 1100; t++) {
        std::size_t expected = 0;
        for (const auto& p : res.issued) {
            if (p.cert.valid_from <= t && t <= p.cert.valid_to) expected++;
        }
        CHECK(f.scms.active_pseudonyms(lt, t).size() == expected);
    }
    CHECK(f.scms.active_pseudonyms(lt, 550).size() == 2); // overlap region
}

TEST_CASE("issuance preconditions") {
    Fixture f;
    auto lt = f.scms.enroll(sim::vehicle_id(0)).lt_id;

    SUBCASE("zero overlap is rejected: windows must overlap partially") {
        auto res = f.scms.issue_pseudonyms(lt, 0, 1000, 600, 0);
        REQUIRE_FALSE(res.ok());
        CHECK(*res.error == IssueError::bad_params);
    }
    SUBCASE("window not exceeding twice the overlap is rejected") {
        auto res = f.scms.issue_pseudonyms(lt, 0, 1000, 200, 100);
        REQUIRE_FALSE(res.ok());
        CHECK(*res.error == IssueError::bad_params);
    }
    SUBCASE("unknown holder is rejected") {
        auto res = f.scms.issue_pseudonyms(LtId{12345}, 0, 1000, 600, 100);
        REQUIRE_FALSE(res.ok());
        CHECK(*res.error == IssueError::unknown_lt);
    }
    SUBCASE("blacklisted holder is refused: the revocation enforcement point") {
        f.scms.blacklist(lt);
        auto res = f.scms.issue_pseudonyms(lt, 0, 1000, 600, 100);
        REQUIRE_FALSE(res.ok());
        CHECK(*res.error == IssueError::blacklisted);
    }
}

TEST_CASE("at most two pseudonyms are active at any tick") {
    RngHub hub(5);
    ScmsService scms(0, hub.stream("scms"));
    Rng& gen = hub.stream("params");
    // randomized window geometries satisfying window > 2*overlap
    for (std::uint32_t i = 0; i < 20; i++) {
        auto lt = scms.enroll(sim::vehicle_id(i)).lt_id;
        sim::Tick overlap = 1 + gen.next_below(200);
        sim::Tick window = 2 * overlap + 1 + gen.next_below(500);
        sim::Tick horizon = 1000 + gen.next_below(4000);
        auto res = scms.issue_pseudonyms(lt, 0, horizon, window, overlap);
        REQUIRE(res.ok());
        for (sim::Tick t = 0; t <= horizon + window; t += 7) {
            CHECK(scms.active_pseudonyms(lt, t).size() <= 2);
        }
    }
}

TEST_CASE("active pseudonym queries") {
    Fixture f;
    auto lt = f.scms.enroll(sim::vehicle_id(0)).lt_id;
    REQUIRE(f.scms.issue_pseudonyms(lt, 0, 1100, 600, 100).ok());

    CHECK(f.scms.active_pseudonyms(lt, 100).size() == 1);  // single window
    CHECK(f.scms.active_pseudonyms(lt, 550).size() == 2);  // overlap
    CHECK(f.scms.active_pseudonyms(lt, 5000).empty());     // beyond horizon
    CHECK_THROWS_AS(f.scms.active_pseudonyms(LtId{999}, 0), std::invalid_argument);
}

TEST_CASE("linkage resolution requires a committed decision") {
    Fixture f;
    auto lt = f.scms.enroll(sim::vehicle_id(0)).lt_id;
    auto issued = f.scms.issue_pseudonyms(lt, 0, 1000, 600, 100);
    REQUIRE(issued.ok());
    auto p = issued.issued[0].cert.p_id;

    SUBCASE("no committed decision: refusal, the privacy guard") {
        auto res = f.scms.resolve_linkage(p, fake_tx(1), 10);
        REQUIRE_FALSE(res.ok());
        CHECK(*res.error == ResolveError::unauthorized);
        CHECK(f.scms.audit_log().empty());
    }
    SUBCASE("committed decision names the pseudonym: resolves to the owner") {
        f.scms.register_committed_decision(fake_tx(1), {p});
        auto res = f.scms.resolve_linkage(p, fake_tx(1), 10);
        REQUIRE(res.ok());
        CHECK(*res.lt == lt);
        CHECK(f.scms.audit_log().size() == 1);
    }
    SUBCASE("decision naming a different pseudonym does not authorize") {
        f.scms.register_committed_decision(fake_tx(1), {PseudonymId{424242}});
        auto res = f.scms.resolve_linkage(p, fake_tx(1), 10);
        CHECK_FALSE(res.ok());
    }
    SUBCASE("unknown pseudonym with a valid-looking authorization errors") {
        PseudonymId ghost{555555};
        f.scms.register_committed_decision(fake_tx(2), {ghost});
        auto res = f.scms.resolve_linkage(ghost, fake_tx(2), 10);
        REQUIRE_FALSE(res.ok());
        CHECK(*res.error == ResolveError::unknown_pseudonym);
    }
}

TEST_CASE("linkage soundness over every issued pseudonym") {
    RngHub hub(8);
    ScmsService scms(0, hub.stream("scms"));
    std::map<PseudonymId, LtId> issued_by;
    for (std::uint32_t i = 0; i < 10; i++) {
        auto lt = scms.enroll(sim::vehicle_id(i)).lt_id;
        auto res = scms.issue_pseudonyms(lt, 0, 3000, 600, 100);
        REQUIRE(res.ok());
        for (const auto& cred : res.issued) issued_by[cred.cert.p_id] = lt;
    }
    for (const auto& [p, lt] : issued_by) {
        scms.register_committed_decision(fake_tx(9), {p});
        auto res = scms.resolve_linkage(p, fake_tx(9), 0);
        REQUIRE(res.ok());
        CHECK(*res.lt == lt);
    }
}

TEST_CASE("revocation") {
    Fixture f;
    auto lt = f.scms.enroll(sim::vehicle_id(0)).lt_id;
    auto issued = f.scms.issue_pseudonyms(lt, 0, 1100, 600, 100);
    REQUIRE(issued.ok());

    SUBCASE("revoke then issue is refused") {
        f.scms.revoke(lt, 50, fake_tx(3));
        auto res = f.scms.issue_pseudonyms(lt, 50, 1000, 600, 100);
        REQUIRE_FALSE(res.ok());
        CHECK(*res.error == IssueError::blacklisted);
    }
    SUBCASE("revocation is idempotent") {
        f.scms.revoke(lt, 50, fake_tx(3));
        auto snapshot_revoked = f.scms.revocation_state().revoked_pseudonyms;
        auto audit_size = f.scms.audit_log().size();
        f.scms.revoke(lt, 60, fake_tx(3));
        CHECK(f.scms.revocation_state().revoked_pseudonyms == snapshot_revoked);
        CHECK(f.scms.audit_log().size() == audit_size);
    }
    SUBCASE("every unexpired pseudonym of the owner is revoked") {
        f.scms.revoke(lt, 550, fake_tx(3));
        std::set<PseudonymId> expected;
        for (const auto& cred : issued.issued) {
            if (cred.cert.valid_to >= 550) expected.insert(cred.cert.p_id);
        }
        CHECK(expected.size() == 2);
        CHECK(f.scms.revocation_state().revoked_pseudonyms == expected);
        CHECK(f.scms.is_blacklisted(lt));
        CHECK(f.scms.is_revoked_lt(lt));
    }
}

TEST_CASE("revocation state grows monotonically") {
    RngHub hub(13);
    ScmsService scms(0, hub.stream("scms"));
    std::vector<LtId> lts;
    for (std::uint32_t i = 0; i < 8; i++) {
        auto lt = scms.enroll(sim::vehicle_id(i)).lt_id;
        REQUIRE(scms.issue_pseudonyms(lt, 0, 2000, 600, 100).ok());
        lts.push_back(lt);
    }
    std::size_t prev_lt = 0, prev_p = 0, prev_bl = 0;
    for (std::size_t i = 0; i < lts.size(); i++) {
        scms.revoke(lts[i], 100 * i, fake_tx(static_cast<std::uint8_t>(i)));
        const auto& st = scms.revocation_state();
        CHECK(st.revoked_lt.size() >= prev_lt);
        CHECK(st.revoked_pseudonyms.size() >= prev_p);
        CHECK(st.ra_blacklist.size() >= prev_bl);
        // blacklist always contains the revoked set
        for (const auto& lt : st.revoked_lt) CHECK(st.ra_blacklist.count(lt) == 1);
        prev_lt = st.revoked_lt.size();
        prev_p = st.revoked_pseudonyms.size();
        prev_bl = st.ra_blacklist.size();
    }
}

TEST_CASE("no issuance after blacklisting") {
    Fixture f;
    auto lt = f.scms.enroll(sim::vehicle_id(0)).lt_id;
    REQUIRE(f.scms.issue_pseudonyms(lt, 0, 500, 200, 50).ok());
    f.scms.revoke(lt, 300, fake_tx(4));

    // nothing issued afterwards: pool must not gain windows starting past
    // the revocation tick
    auto res = f.scms.issue_pseudonyms(lt, 300, 2000, 200, 50);
    CHECK_FALSE(res.ok());
    for (const auto& p : f.scms.pools().at(lt)) {
        CHECK(p.cert.valid_from < 300 + 200);
    }
}

TEST_CASE("pca signature binds certs to the issuing region") {
    Fixture f;
    auto lt = f.scms.enroll(sim::vehicle_id(0)).lt_id;
    auto issued = f.scms.issue_pseudonyms(lt, 0, 500, 300, 50);
    REQUIRE(issued.ok());

    TrustAnchors anchors;
    anchors.pca_keys[0] = f.scms.pca_key();
    CHECK(anchors.verify_cert(issued.issued[0].cert));

    SUBCASE("tampered validity window breaks the cert") {
        auto cert = issued.issued[0].cert;
        cert.valid_to += 1;
        CHECK_FALSE(anchors.verify_cert(cert));
    }
    SUBCASE("certs from an unknown region do not verify") {
        auto cert = issued.issued[0].cert;
        cert.region = 9;
        CHECK_FALSE(anchors.verify_cert(cert));
    }
}
