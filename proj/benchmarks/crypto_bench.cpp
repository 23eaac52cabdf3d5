// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "hybridsplit/crypto.hpp"

namespace {

using namespace hybridsplit;

void BM_Keccak256(benchmark::State& state) {
    const Bytes data(static_cast<std::size_t>(state.range(0)), 0xab);
    for (auto _ : state) benchmark::DoNotOptimize(crypto::keccak256(ByteView(data)));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_Keccak256)->Arg(32)->Arg(136)->Arg(4096);

void BM_Sign(benchmark::State& state) {
    const auto keys = crypto::derive_keypair({1});
    const auto digest = crypto::keccak256(std::string_view("bench"));
    for (auto _ : state) benchmark::DoNotOptimize(crypto::ecsign(digest, keys.secret));
}
BENCHMARK(BM_Sign);

void BM_Recover(benchmark::State& state) {
    const auto keys = crypto::derive_keypair({1});
    const auto digest = crypto::keccak256(std::string_view("bench"));
    const auto sig = crypto::ecsign(digest, keys.secret);
    for (auto _ : state) benchmark::DoNotOptimize(crypto::ecrecover(digest, sig));
}
BENCHMARK(BM_Recover);

}  // namespace

BENCHMARK_MAIN();
