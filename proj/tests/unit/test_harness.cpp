#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "blackchain/harness/runner.hpp"

using namespace blackchain;
using harness::ScenarioConfig;
using harness::Simulation;

namespace {

ScenarioConfig attack_scenario(std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.ticks = 800;
    cfg.vehicles = 20;
    cfg.world_m = 1400;
    cfg.radio_range_m = 500;
    cfg.regions = 2;
    cfg.rsu_positions = {{350, 350}, {1050, 350}, {350, 1050}, {1050, 1050}};
    cfg.rsu_cell_m = 2000; // one group of four
    cfg.pow_difficulty_bits = 8;

    adversary::AttackProfile attack;
    attack.strategy = adversary::Strategy::false_position;
    attack.targets = {0};
    attack.offset_m = 500;
    attack.start_tick = 100;
    cfg.attacks.push_back(attack);
    return cfg;
}

} // namespace

TEST_CASE("end-to-end revocation pipeline") {
    ScenarioConfig cfg = attack_scenario(7);
    Simulation sim(cfg);
    auto result = sim.run();

    REQUIRE(result.metrics.attackers.size() == 1);
    const auto& outcome = result.metrics.attackers[0];
    CHECK(outcome.first_false_beacon.has_value());
    CHECK(outcome.revocation_tx_committed.has_value());
    REQUIRE(outcome.blacklisted_all_regions.has_value());
    CHECK(*outcome.revocation_latency() <= 600);
    CHECK(result.metrics.false_revocations == 0);

    // the attacker's lt is blacklisted in every region
    auto services = sim.region_services();
    auto lt = sim.lt_of_vehicle(0);
    for (auto* region : services) CHECK(region->is_blacklisted(lt));

    // the produced chain passes the full audit
    auto verdict = ledger::verify_chain(result.chain, result.genesis);
    CHECK(verdict.ok);
    CHECK(result.metrics.revocation_txs >= 1);
    CHECK(result.metrics.introduction_txs == 4);
}

TEST_CASE("replay determinism: identical seeds give identical chains and metrics") {
    ScenarioConfig cfg = attack_scenario(11);
    std::ostringstream log_a, log_b;
    Simulation a(cfg, &log_a);
    Simulation b(cfg, &log_b);
    auto ra = a.run();
    auto rb = b.run();

    CHECK(ledger::chain_file_bytes(ra.chain) == ledger::chain_file_bytes(rb.chain));
    CHECK(ra.metrics.csv_row() == rb.metrics.csv_row());
    CHECK(log_a.str() == log_b.str());
}

TEST_CASE("honest run: no revocations, exact beacon rate") {
    ScenarioConfig cfg;
    cfg.seed = 3;
    cfg.ticks = 300;
    cfg.vehicles = 10;
    cfg.world_m = 1000;
    cfg.rsu_positions = {{500, 500}};
    cfg.regions = 1;
    cfg.pow_difficulty_bits = 4;

    Simulation sim(cfg);
    auto result = sim.run();

    CHECK(result.metrics.false_revocations == 0);
    CHECK(result.metrics.revocation_txs == 0);
    CHECK(result.metrics.reports_generated == 0);
    CHECK(result.metrics.max_active_pseudonyms <= 2);
    // one beacon per covered tick per vehicle: 10 per simulated second
    for (const auto& v : sim.vehicles()) {
        CHECK(v.beacons_emitted == v.covered_ticks);
        CHECK(v.covered_ticks == cfg.ticks);
    }
}

TEST_CASE("run_scenario writes artifacts and audit accepts them") {
    ScenarioConfig cfg = attack_scenario(5);
    cfg.ticks = 400;
    cfg.out_dir = "/tmp/blackchain_test_run";

    auto outcome = harness::run_scenario(cfg);
    REQUIRE(outcome.ok);

    auto audit = harness::audit_chain_file(outcome.chain_path, outcome.genesis_path);
    CHECK(audit.status == harness::AuditStatus::verified);

    // metrics integrity: ledger_bytes equals the persisted file size
    std::ifstream chain(outcome.chain_path, std::ios::binary | std::ios::ate);
    REQUIRE(chain.good());
    CHECK(static_cast<std::uint64_t>(chain.tellg()) == outcome.metrics.ledger_bytes);
    CHECK(outcome.metrics.reports_committed <= outcome.metrics.reports_generated);
}

TEST_CASE("beacons switch to the newer pseudonym inside the overlap window") {
    ScenarioConfig cfg;
    cfg.seed = 21;
    cfg.ticks = 620; // crosses the overlap window [500, 600]
    cfg.vehicles = 2;
    cfg.world_m = 200; // always in mutual range
    cfg.allow_radio_range_override = true;
    cfg.radio_range_m = 1000;
    cfg.regions = 1;
    cfg.rsu_positions = {{100, 100}};
    cfg.pow_difficulty_bits = 0;

    Simulation sim(cfg);
    sim.run();

    // vehicle 1 observed vehicle 0's beacons; the first-window pseudonym
    // must stop beaconing exactly when the second window opens
    const auto& observer = sim.vehicles()[1];
    const auto& pool = sim.vehicles()[0].pool;
    REQUIRE(pool.size() >= 2);
    const auto* first_window_last = observer.history.last_of(pool[0].cert.p_id);
    const auto* second_window_last = observer.history.last_of(pool[1].cert.p_id);
    REQUIRE(first_window_last != nullptr);
    REQUIRE(second_window_last != nullptr);
    CHECK(first_window_last->tick == pool[1].cert.valid_from - 1);
    // delivery is next-tick, so the newest observable beacon is from ticks-2
    CHECK(second_window_last->tick == cfg.ticks - 2);
}

TEST_CASE("a revoked vehicle goes silent") {
    ScenarioConfig cfg = attack_scenario(13);
    Simulation sim(cfg);
    auto result = sim.run();
    REQUIRE(result.metrics.attackers[0].blacklisted_all_regions.has_value());
    const auto& attacker = sim.vehicles()[0];
    // silent from the revocation tick onward
    CHECK(attacker.covered_ticks < cfg.ticks);
    CHECK(attacker.beacons_emitted <= *result.metrics.attackers[0].blacklisted_all_regions + 1);
}

TEST_CASE("heartbeat mining extends the chain without transactions") {
    ScenarioConfig cfg;
    cfg.seed = 5;
    cfg.ticks = 120;
    cfg.vehicles = 3;
    cfg.world_m = 500;
    cfg.regions = 1;
    cfg.rsu_positions = {{250, 250}};
    cfg.pow_difficulty_bits = 0;

    SUBCASE("off by default: only introduction blocks") {
        Simulation sim(cfg);
        auto result = sim.run();
        CHECK(result.metrics.chain_blocks <= 2);
    }
    SUBCASE("enabled: empty blocks accumulate") {
        cfg.heartbeat_mining = true;
        Simulation sim(cfg);
        auto result = sim.run();
        CHECK(result.metrics.chain_blocks > 5);
        CHECK(ledger::verify_chain(result.chain, result.genesis).ok);
    }
}

TEST_CASE("byzantine RSUs in simulation never break group agreement") {
    ScenarioConfig cfg = attack_scenario(31);
    cfg.ticks = 600;

    SUBCASE("one silent member: liveness and safety hold") {
        adversary::AttackProfile byz;
        byz.strategy = adversary::Strategy::byz_rsu_silent;
        byz.targets = {3};
        cfg.attacks.push_back(byz);

        Simulation sim(cfg);
        auto result = sim.run();
        // the attacker still gets revoked with 3 of 4 RSUs honest
        CHECK(result.metrics.attackers[0].blacklisted_all_regions.has_value());
        CHECK(result.metrics.bft_rounds_committed > 0);
    }
    SUBCASE("equivocating leader: no two statements certify at one height") {
        adversary::AttackProfile byz;
        byz.strategy = adversary::Strategy::byz_rsu_equivocate;
        byz.targets = {0};
        cfg.attacks.push_back(byz);

        Simulation sim(cfg);
        auto result = sim.run();
        (void)result;
        const auto& rsus = sim.rsus();
        const std::uint64_t max_height = cfg.ticks / cfg.bft_round_ticks + 1;
        for (std::uint64_t h = 0; h < max_height; h++) {
            std::set<std::string> hashes;
            for (const auto& r : rsus) {
                const auto* stmt = r.engine.committed_statement(h);
                if (stmt != nullptr) hashes.insert(to_hex(stmt->statement_hash()));
            }
            CHECK(hashes.size() <= 1);
        }
    }
}

TEST_CASE("committed blocks buffered through coverage gaps arrive in order") {
    // a single corner RSU leaves most of the world uncovered: heads buffer
    // their committed blocks until they wander into range
    ScenarioConfig cfg;
    cfg.seed = 44;
    cfg.ticks = 1500;
    cfg.vehicles = 8;
    cfg.world_m = 1600;
    cfg.regions = 1;
    cfg.rsu_positions = {{100, 100}};
    cfg.pow_difficulty_bits = 0;

    std::ostringstream log;
    Simulation sim(cfg, &log);
    sim.run();

    // per (head, cluster): forwarded heights strictly increase
    std::map<std::pair<std::string, std::string>, std::int64_t> last_height;
    std::istringstream lines(log.str());
    std::string line;
    std::size_t forwarded = 0, buffered_backlog = 0;
    while (std::getline(lines, line)) {
        if (line.find("event=block_to_rsu") == std::string::npos) continue;
        forwarded++;
        auto field = [&](const std::string& key) {
            auto at = line.find(key + "=");
            REQUIRE(at != std::string::npos);
            auto end = line.find(' ', at);
            return line.substr(at + key.size() + 1, end - at - key.size() - 1);
        };
        auto node = field("node");
        auto cluster = field("cluster");
        auto height = std::stoll(field("height"));
        auto key = std::make_pair(node, cluster);
        auto it = last_height.find(key);
        if (it != last_height.end()) {
            CHECK(height > it->second);
            if (height > it->second + 1) buffered_backlog++; // flushed a gap... impossible per-commit
        }
        last_height[key] = height;
    }
    (void)buffered_backlog;
    CHECK(forwarded > 0);
    // at least one tick buffered blocks because no RSU was in range
    CHECK(log.str().find("cluster_commit") != std::string::npos);
}

TEST_CASE("config parsing") {
    SUBCASE("valid config") {
        auto res = harness::parse_scenario_text("seed = 9\n"
                                                "ticks = 100\n"
                                                "vehicles = 5\n"
                                                "rsu = 100,200\n"
                                                "attack = strategy:false_position targets:0 "
                                                "offset_m:400 start:10 end:90\n");
        REQUIRE(res.ok());
        CHECK(res.config->seed == 9);
        CHECK(res.config->rsu_positions.size() == 1);
        REQUIRE(res.config->attacks.size() == 1);
        CHECK(res.config->attacks[0].offset_m == 400);
    }
    SUBCASE("unknown key rejected by name") {
        auto res = harness::parse_scenario_text("frobnicate = 1\nrsu = 1,1\n");
        REQUIRE_FALSE(res.ok());
        bool named = false;
        for (const auto& e : res.errors) named = named || e.key == "frobnicate";
        CHECK(named);
    }
    SUBCASE("negative radio range is a named diagnostic") {
        auto res = harness::parse_scenario_text("radio_range_m = -5\nrsu = 1,1\n");
        REQUIRE_FALSE(res.ok());
        bool named = false;
        for (const auto& e : res.errors) named = named || e.key == "radio_range_m";
        CHECK(named);
    }
    SUBCASE("radio range outside the modeled band needs an explicit override") {
        auto res = harness::parse_scenario_text("radio_range_m = 100\nrsu = 1,1\n");
        CHECK_FALSE(res.ok());
        auto forced = harness::parse_scenario_text(
            "radio_range_m = 100\nallow_radio_range_override = true\nrsu = 1,1\n");
        CHECK(forced.ok());
    }
    SUBCASE("environment override wins") {
        setenv("BLACKCHAIN_SEED", "777", 1);
        auto res = harness::parse_scenario_text("seed = 1\nrsu = 1,1\n");
        unsetenv("BLACKCHAIN_SEED");
        REQUIRE(res.ok());
        CHECK(res.config->seed == 777);
    }
}

TEST_CASE("sweep grids") {
    ScenarioConfig base;
    base.seed = 2;
    base.ticks = 60;
    base.vehicles = 4;
    base.world_m = 600;
    base.radio_range_m = 500;
    base.regions = 1;
    base.rsu_positions = {{300, 300}};
    base.pow_difficulty_bits = 0;
    base.out_dir = "/tmp/blackchain_test_sweep";

    SUBCASE("grid over difficulty gives one row per value") {
        std::ostringstream csv;
        auto res = harness::run_sweep(base, "pow_difficulty_bits = 0, 4, 8\n", csv);
        REQUIRE(res.ok);
        CHECK(res.rows == 3);
    }
    SUBCASE("two axes cross product") {
        std::ostringstream csv;
        auto res = harness::run_sweep(base, "vehicles = 2, 4\nseed = 1, 2\n", csv);
        REQUIRE(res.ok);
        CHECK(res.rows == 4);
    }
    SUBCASE("empty grid runs the base config once") {
        std::ostringstream csv;
        auto res = harness::run_sweep(base, "", csv);
        REQUIRE(res.ok);
        CHECK(res.rows == 1);
    }
    SUBCASE("unknown grid key is diagnosed") {
        std::ostringstream csv;
        auto res = harness::run_sweep(base, "bogus = 1,2\n", csv);
        CHECK_FALSE(res.ok);
        CHECK(res.error.find("bogus") != std::string::npos);
    }
}
