#include <benchmark/benchmark.h>

#include "blackchain/harness/runner.hpp"

using namespace blackchain;

namespace {

// one revocation-producing run, reused across ledger benchmarks
struct ChainFixture {
    std::vector<ledger::GlobalBlock> chain;
    ledger::GenesisConfig genesis;

    ChainFixture() {
        harness::ScenarioConfig cfg;
        cfg.seed = 17;
        cfg.ticks = 600;
        cfg.vehicles = 20;
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

        harness::Simulation sim(cfg);
        auto result = sim.run();
        chain = std::move(result.chain);
        genesis = std::move(result.genesis);
    }
};

ChainFixture& fixture() {
    static ChainFixture f;
    return f;
}

} // namespace

static void BM_MineBlock(benchmark::State& state) {
    const auto bits = static_cast<std::uint32_t>(state.range(0));
    Hash256 prev;
    std::uint64_t h = 0;
    for (auto _ : state) {
        // vary the height so every iteration searches a fresh puzzle
        auto block = ledger::mine_block({}, h++, prev, bits);
        benchmark::DoNotOptimize(block.nonce);
    }
}
BENCHMARK(BM_MineBlock)->Arg(0)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

static void BM_VerifyChain(benchmark::State& state) {
    auto& f = fixture();
    for (auto _ : state) {
        auto verdict = ledger::verify_chain(f.chain, f.genesis);
        benchmark::DoNotOptimize(verdict.ok);
    }
    state.SetLabel(std::to_string(f.chain.size()) + " blocks");
}
BENCHMARK(BM_VerifyChain)->Unit(benchmark::kMicrosecond);

static void BM_ChainEncode(benchmark::State& state) {
    auto& f = fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(ledger::chain_file_bytes(f.chain));
    }
}
BENCHMARK(BM_ChainEncode)->Unit(benchmark::kMicrosecond);

static void BM_ChainParse(benchmark::State& state) {
    auto bytes = ledger::chain_file_bytes(fixture().chain);
    for (auto _ : state) {
        auto parsed = ledger::parse_chain_file(bytes);
        benchmark::DoNotOptimize(parsed.ok);
    }
}
BENCHMARK(BM_ChainParse)->Unit(benchmark::kMicrosecond);
