#include <benchmark/benchmark.h>

#include "blackchain/rng.hpp"
#include "blackchain/schnorr.hpp"
#include "blackchain/sha256.hpp"

using namespace blackchain;

static void BM_Sha256(benchmark::State& state) {
    std::vector<std::uint8_t> data(static_cast<std::size_t>(state.range(0)));
    Rng rng(1, "bench");
    for (auto& b : data) b = static_cast<std::uint8_t>(rng.next_u64());
    for (auto _ : state) {
        benchmark::DoNotOptimize(sha256(data));
    }
    state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sha256)->Arg(64)->Arg(256)->Arg(4096);

static void BM_SchnorrSign(benchmark::State& state) {
    auto kp = schnorr::keypair_from_seed(7);
    std::vector<std::uint8_t> msg(128, 0xa5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(schnorr::sign(kp.sk, kp.pk, SigDomain::beacon, msg));
    }
}
BENCHMARK(BM_SchnorrSign);

static void BM_SchnorrVerify(benchmark::State& state) {
    auto kp = schnorr::keypair_from_seed(7);
    std::vector<std::uint8_t> msg(128, 0xa5);
    auto sig = schnorr::sign(kp.sk, kp.pk, SigDomain::beacon, msg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(schnorr::verify(kp.pk, SigDomain::beacon, msg, sig));
    }
}
BENCHMARK(BM_SchnorrVerify);
