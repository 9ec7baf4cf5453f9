#include <benchmark/benchmark.h>

#include "blackchain/harness/runner.hpp"
#include "blackchain/vehicle/report.hpp"

using namespace blackchain;

static void BM_FullScenario(benchmark::State& state) {
    harness::ScenarioConfig cfg;
    cfg.ticks = static_cast<sim::Tick>(state.range(0));
    cfg.vehicles = static_cast<std::uint32_t>(state.range(1));
    cfg.world_m = 1400;
    cfg.regions = 2;
    cfg.rsu_positions = {{350, 350}, {1050, 350}, {350, 1050}, {1050, 1050}};
    cfg.pow_difficulty_bits = 8;
    adversary::AttackProfile attack;
    attack.strategy = adversary::Strategy::false_position;
    attack.targets = {0};
    attack.offset_m = 500;
    attack.start_tick = 100;
    cfg.attacks.push_back(attack);

    std::uint64_t seed = 1;
    for (auto _ : state) {
        cfg.seed = seed++;
        harness::Simulation sim(cfg);
        auto result = sim.run();
        benchmark::DoNotOptimize(result.metrics.ledger_bytes);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0)); // ticks/s
}
BENCHMARK(BM_FullScenario)
    ->Args({400, 20})
    ->Args({800, 20})
    ->Args({800, 50})
    ->Unit(benchmark::kMillisecond);

static void BM_VerifyReport(benchmark::State& state) {
    RngHub hub(3);
    scms::ScmsService scms(0, hub.stream("scms/0"));
    vehicle::VerifyContext ctx;
    ctx.anchors.pca_keys[0] = scms.pca_key();

    auto lt_a = scms.enroll(sim::vehicle_id(0)).lt_id;
    auto lt_b = scms.enroll(sim::vehicle_id(1)).lt_id;
    auto cred_a = scms.issue_pseudonyms(lt_a, 0, 1000, 600, 100).issued[0];
    auto cred_b = scms.issue_pseudonyms(lt_b, 0, 1000, 600, 100).issued[0];

    vehicle::KinematicState k;
    auto b1 = vehicle::make_beacon(cred_a, 10, k);
    k.pos = {400, 0};
    auto b2 = vehicle::make_beacon(cred_a, 11, k);
    vehicle::BeaconHistory hist;
    hist.observe(b1);
    auto det = vehicle::detect_misbehavior(hist, b2, ctx.det);
    auto report = *vehicle::build_report({det->statement}, det->evidence, cred_b, 1, 11).report;

    for (auto _ : state) {
        benchmark::DoNotOptimize(vehicle::verify_report(report, ctx).ok);
    }
}
BENCHMARK(BM_VerifyReport)->Unit(benchmark::kMicrosecond);
