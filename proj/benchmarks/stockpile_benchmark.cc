// Copyright 2026 The Stockpile PSI Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include <algorithm>
#include <numeric>

#include "stockpile/bits.h"
#include "stockpile/circuit.h"
#include "stockpile/compiler.h"
#include "stockpile/gadgets.h"
#include "stockpile/mpc.h"
#include "stockpile/session.h"
#include "stockpile/vulnid.h"

namespace stockpile {
namespace {

CircuitConfig Config(std::size_t n, std::size_t u, std::size_t sigma) {
  CircuitConfig cfg;
  cfg.n_parties = n;
  cfg.inputs_per_party = u;
  cfg.sigma = sigma;
  return cfg;
}

void BM_HashIdentifier(benchmark::State& state) {
  VulnIdentifier id{"cpe:2.3:a:openssl:openssl:1.0.1f:*:*:*:*:*:*:*", 125,
                    "tls1_process_heartbeat"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(HashIdentifier(id, 256));
  }
}
BENCHMARK(BM_HashIdentifier);

void BM_CountDepletionGates(benchmark::State& state) {
  const auto cfg = Config(state.range(0), state.range(1), 256);
  for (auto _ : state) {
    auto compiled = BuildDepletionCircuit(cfg, BuildMode::kCountOnly);
    benchmark::DoNotOptimize(compiled.totals.and_count);
    state.counters["ands"] = static_cast<double>(compiled.totals.and_count);
  }
}
BENCHMARK(BM_CountDepletionGates)
    ->Args({2, 100})
    ->Args({5, 100})
    ->Unit(benchmark::kMillisecond);

void BM_BuildDepletionCircuit(benchmark::State& state) {
  const auto cfg = Config(state.range(0), state.range(1), 64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(BuildDepletionCircuit(cfg).totals);
  }
}
BENCHMARK(BM_BuildDepletionCircuit)
    ->Args({3, 8})
    ->Args({5, 16})
    ->Unit(benchmark::kMillisecond);

void BM_WaksmanRoute(benchmark::State& state) {
  std::vector<std::size_t> perm(state.range(0));
  std::iota(perm.begin(), perm.end(), 0);
  BitRng rng(1);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(WaksmanRoute(perm));
  }
}
BENCHMARK(BM_WaksmanRoute)->Arg(64)->Arg(1000)->Arg(10000);

// One depletion round on the MPC backend, AND gates per second reported.
void BM_RunRound(benchmark::State& state) {
  const std::size_t n = state.range(0), u = state.range(1);
  SessionConfig cfg;
  for (PartyId p = 0; p < n; ++p) cfg.active_parties.push_back(p);
  cfg.sigma = 64;
  cfg.seed = 3;
  cfg.backend = state.range(2) ? Backend::kMpc : Backend::kPlaintext;
  BitRng rng(4);
  std::vector<PreparedInput> inputs;
  for (PartyId p = 0; p < n; ++p) {
    Stockpile s(p, cfg.sigma);
    for (std::size_t i = 0; i < u; ++i) {
      s.Add(HashedId::FromUint(1 + rng.Uniform(4 * u), cfg.sigma));
    }
    inputs.push_back(PrepareInputs(s, u, cfg.KeyBits(), 0, rng));
  }
  std::uint64_t ands = 0;
  for (auto _ : state) {
    auto r = RunRound(cfg, inputs);
    ands += r.gates.and_count;
  }
  state.counters["and_per_s"] =
      benchmark::Counter(static_cast<double>(ands), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_RunRound)
    ->Args({2, 16, 1})
    ->Args({3, 16, 1})
    ->Args({5, 16, 1})
    ->Args({5, 16, 0})
    ->Unit(benchmark::kMillisecond);

void BM_DealTriples(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(mpc::DealTriples(3, state.range(0), 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DealTriples)->Arg(1 << 16)->Arg(1 << 20);

}  // namespace
}  // namespace stockpile

BENCHMARK_MAIN();
