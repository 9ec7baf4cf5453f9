#include <doctest.h>

#include "blackchain/cluster/block.hpp"
#include "blackchain/rng.hpp"
#include "blackchain/scms/scms.hpp"

using namespace blackchain;
using namespace blackchain::cluster;

namespace {

scms::PseudonymId pid(std::uint64_t v) { return scms::PseudonymId{v}; }

// credentialed members with certs, for block-level tests
struct Fixture {
    RngHub hub{7};
    scms::ScmsService scms{0, hub.stream("scms/0")};
    vehicle::VerifyContext ctx;
    std::vector<scms::PseudonymWithKey> creds;

    explicit Fixture(std::size_t n = 5) {
        ctx.anchors.pca_keys[0] = scms.pca_key();
        for (std::uint32_t i = 0; i < n; i++) {
            auto lt = scms.enroll(sim::vehicle_id(i)).lt_id;
            auto issued = scms.issue_pseudonyms(lt, 0, 2000, 600, 100);
            REQUIRE(issued.ok());
            creds.push_back(issued.issued[0]);
        }
        // stable identity order for quorum assertions
        std::sort(creds.begin(), creds.end(), [](const auto& a, const auto& b) {
            return a.cert.p_id < b.cert.p_id;
        });
    }

    ClusterBlock block(std::size_t members, sim::Tick t = 10) const {
        ClusterBlock b;
        b.cluster_id = 42;
        b.height = 0;
        b.tick = t;
        for (std::size_t i = 0; i < members; i++) b.member_certs.push_back(creds[i].cert);
        return b;
    }

    void endorse(ClusterBlock& b, std::initializer_list<std::size_t> who) const {
        const Hash256 h = b.candidate_hash();
        for (auto i : who) {
            Endorsement e;
            e.voter = creds[i].cert;
            e.sig = sign_endorsement(creds[i], h);
            b.endorsements.push_back(e);
        }
    }
};

} // namespace

TEST_CASE("three mutually-in-range vehicles form one cluster with min-id head") {
    std::map<scms::PseudonymId, sim::Position> pos{
        {pid(30), {0, 0}},
        {pid(10), {100, 0}},
        {pid(20), {0, 100}},
    };
    auto clusters = form_clusters(pos, sim::RadioModel{500}, 5);
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].members == std::vector<scms::PseudonymId>{pid(10), pid(20), pid(30)});
    CHECK(clusters[0].head == pid(10));
    CHECK(clusters[0].formed_at == 5);
}

TEST_CASE("vehicles beyond twice the range form singletons") {
    std::map<scms::PseudonymId, sim::Position> pos{
        {pid(1), {0, 0}},
        {pid(2), {1200, 0}},
    };
    auto clusters = form_clusters(pos, sim::RadioModel{500}, 0);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].members.size() == 1);
    CHECK(clusters[1].members.size() == 1);
}

TEST_CASE("greedy trace on a chain topology: A-B in range, C apart") {
    // A(1) at 0, B(2) at 400, C(3) at 800: A-B and B-C in range, A-C not.
    // Greedy seeds at A, adds B (in range of all members), rejects C
    // (out of range of A), then C forms its own cluster.
    std::map<scms::PseudonymId, sim::Position> pos{
        {pid(1), {0, 0}},
        {pid(2), {400, 0}},
        {pid(3), {800, 0}},
    };
    auto clusters = form_clusters(pos, sim::RadioModel{500}, 0);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].members == std::vector<scms::PseudonymId>{pid(1), pid(2)});
    CHECK(clusters[1].members == std::vector<scms::PseudonymId>{pid(3)});
}

TEST_CASE("cluster id binds the formation tick") {
    std::map<scms::PseudonymId, sim::Position> pos{{pid(1), {0, 0}}, {pid(2), {10, 0}}};
    auto a = form_clusters(pos, sim::RadioModel{500}, 100);
    auto b = form_clusters(pos, sim::RadioModel{500}, 150);
    CHECK(a[0].cluster_id != b[0].cluster_id);
}

TEST_CASE("quorum arithmetic") {
    CHECK(quorum_size(1) == 1);
    CHECK(quorum_size(2) == 2);
    CHECK(quorum_size(5) == 3);
    CHECK(quorum_size(6) == 4);
    CHECK(local_revocation_threshold(6) == 3); // floor((6-1)/2)+1
    CHECK(local_revocation_threshold(5) == 3);
    CHECK(local_revocation_threshold(2) == 1);
}

TEST_CASE("endorsement quorum decides commitment") {
    Fixture f;
    SUBCASE("five members, three endorsements commit") {
        auto b = f.block(5);
        f.endorse(b, {0, 1, 2});
        CHECK(count_valid_endorsements(b) == 3);
        CHECK(has_commit_quorum(b));
    }
    SUBCASE("five members, two endorsements do not commit") {
        auto b = f.block(5);
        f.endorse(b, {0, 1});
        CHECK_FALSE(has_commit_quorum(b));
    }
    SUBCASE("duplicate endorsements count once") {
        auto b = f.block(5);
        f.endorse(b, {0, 0, 0, 1});
        CHECK(count_valid_endorsements(b) == 2);
        CHECK_FALSE(has_commit_quorum(b));
    }
    SUBCASE("non-member endorsements never count") {
        auto b = f.block(3); // members 0..2
        f.endorse(b, {0, 3, 4});
        CHECK(count_valid_endorsements(b) == 1);
    }
    SUBCASE("forged endorsement signature never counts") {
        auto b = f.block(3);
        f.endorse(b, {0, 1});
        b.endorsements[1].sig.s ^= 1;
        CHECK(count_valid_endorsements(b) == 1);
    }
    SUBCASE("endorsements are bound to the candidate content") {
        auto b = f.block(3);
        f.endorse(b, {0, 1});
        b.tick += 1; // content change invalidates all endorsements
        CHECK(count_valid_endorsements(b) == 0);
    }
}

TEST_CASE("local revocation decisions") {
    Fixture f(6);
    auto suspect = f.creds[5].cert.p_id;

    SUBCASE("six members, three of five non-suspect votes suffice") {
        auto b = f.block(6);
        RevocationTally tally;
        tally.suspect = suspect;
        tally.voters = {f.creds[0].cert.p_id, f.creds[1].cert.p_id, f.creds[2].cert.p_id};
        b.revocation_votes.push_back(tally);
        CHECK(local_revocation_decision(b, suspect));
    }
    SUBCASE("two votes of five do not suffice") {
        auto b = f.block(6);
        RevocationTally tally;
        tally.suspect = suspect;
        tally.voters = {f.creds[0].cert.p_id, f.creds[1].cert.p_id};
        b.revocation_votes.push_back(tally);
        CHECK_FALSE(local_revocation_decision(b, suspect));
    }
    SUBCASE("the suspect's own vote is discarded") {
        auto b = f.block(6);
        RevocationTally tally;
        tally.suspect = suspect;
        tally.voters = {suspect, f.creds[0].cert.p_id, f.creds[1].cert.p_id};
        b.revocation_votes.push_back(tally);
        CHECK_FALSE(local_revocation_decision(b, suspect)); // 2 counted, need 3
    }
    SUBCASE("two sybil votes against five honest members fail") {
        // 7 members: 5 honest + 2 pseudonyms of one attacker; the attacker
        // votes to revoke an honest victim with both identities
        Fixture g(7);
        auto b = g.block(7);
        auto victim = g.creds[0].cert.p_id;
        RevocationTally tally;
        tally.suspect = victim;
        tally.voters = {g.creds[5].cert.p_id, g.creds[6].cert.p_id};
        b.revocation_votes.push_back(tally);
        // threshold is floor((7-1)/2)+1 = 4
        CHECK_FALSE(local_revocation_decision(b, victim));
    }
}

TEST_CASE("cluster block canonical encoding round-trips") {
    Fixture f;
    auto b = f.block(3);
    RevocationTally tally;
    tally.suspect = f.creds[2].cert.p_id;
    tally.voters = {f.creds[0].cert.p_id};
    b.revocation_votes.push_back(tally);
    f.endorse(b, {0, 1});

    ByteWriter w;
    b.encode(w);
    ByteReader r(w.data());
    auto back = ClusterBlock::decode(r);
    CHECK(r.done());
    CHECK(back.candidate_hash() == b.candidate_hash());
    CHECK(back.endorsements.size() == b.endorsements.size());
    CHECK(count_valid_endorsements(back) == 2);
}

TEST_CASE("chain linkage: candidate hash covers everything except endorsements") {
    Fixture f;
    auto b = f.block(3);
    const Hash256 h0 = b.candidate_hash();
    f.endorse(b, {0, 1, 2});
    CHECK(b.candidate_hash() == h0); // endorsement set does not move the hash

    auto next = f.block(3);
    next.height = 1;
    next.prev_hash = h0;
    CHECK(next.candidate_hash() != h0);
}

TEST_CASE("nearest RSU selection for block forwarding") {
    sim::RadioModel radio{500};
    std::map<sim::NodeId, sim::Position> rsus{
        {sim::rsu_id(0), {200, 0}},
        {sim::rsu_id(1), {300, 0}},
        {sim::rsu_id(2), {2000, 0}},
    };
    SUBCASE("nearest in-range RSU wins") {
        auto got = nearest_rsu_in_range({0, 0}, rsus, radio);
        REQUIRE(got.has_value());
        CHECK(*got == sim::rsu_id(0));
    }
    SUBCASE("none in range means buffering") {
        CHECK_FALSE(nearest_rsu_in_range({5000, 5000}, rsus, radio).has_value());
    }
    SUBCASE("distance ties go to the lower node id") {
        std::map<sim::NodeId, sim::Position> tied{
            {sim::rsu_id(0), {100, 0}},
            {sim::rsu_id(1), {-100, 0}},
        };
        auto got = nearest_rsu_in_range({0, 0}, tied, radio);
        REQUIRE(got.has_value());
        CHECK(*got == sim::rsu_id(0));
    }
    SUBCASE("boundary distance is still in range") {
        std::map<sim::NodeId, sim::Position> edge{{sim::rsu_id(3), {500, 0}}};
        auto got = nearest_rsu_in_range({0, 0}, edge, radio);
        REQUIRE(got.has_value());
        CHECK(*got == sim::rsu_id(3));
    }
}

TEST_CASE("per-height single endorsement prevents conflicting commits") {
    // a member endorses at most one candidate per height; with honest
    // members holding that rule, two candidates cannot both reach majority
    Fixture f;
    auto a = f.block(5);
    auto b = f.block(5);
    b.tick = 11; // different content, same height

    // honest members 0,1,2 endorse a; members 3,4 endorse b
    f.endorse(a, {0, 1, 2});
    f.endorse(b, {3, 4});
    CHECK(has_commit_quorum(a));
    CHECK_FALSE(has_commit_quorum(b));
    // even if one member also signed b (equivocation), b reaches only 3 of 5
    // with two honest holdouts -- quorum intersection contains an honest member
    f.endorse(b, {0});
    CHECK(count_valid_endorsements(b) == 3);
}
