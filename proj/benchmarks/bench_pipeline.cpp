// Copyright 2026 The leafindex Authors
// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "leafindex/analytic_index.hpp"
#include "leafindex/builtin_operators.hpp"
#include "leafindex/charclass.hpp"
#include "leafindex/density.hpp"
#include "leafindex/idempotent.hpp"
#include "leafindex/operator.hpp"
#include "leafindex/parametrix.hpp"
#include "leafindex/trace.hpp"

using namespace leafindex;

namespace {

FiberedGSpace torus(int N) {
  return FiberedGSpace::from_group(FiniteGroup::trivial(), BaseModel::uniform(1), {},
                                   FiberModel{FiberModel::Kind::torus, 2, N, 2 * N + 4}, {});
}

void BM_Quantize(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  auto space = torus(N);
  auto spec = twisted_dolbeault(1, N);
  for (auto _ : state) benchmark::DoNotOptimize(quantize(space, spec.symbol, spec.src, spec.dst));
}
BENCHMARK(BM_Quantize)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_AnalyticIndex(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  auto space = torus(N);
  auto spec = twisted_dolbeault(1, N);
  auto D = quantize(space, spec.symbol, spec.src, spec.dst);
  for (auto _ : state) benchmark::DoNotOptimize(analytic_index(D));
}
BENCHMARK(BM_AnalyticIndex)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_IndexIdempotent(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  auto space = torus(N);
  auto spec = twisted_dolbeault(1, N);
  auto D = mark_invariant(space, quantize(space, spec.symbol, spec.src, spec.dst), 1e-10);
  for (auto _ : state) benchmark::DoNotOptimize(index_idempotent(space, D, parametrix(space, spec, D)));
}
BENCHMARK(BM_IndexIdempotent)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PushforwardChern(benchmark::State& state) {
  const int nz = static_cast<int>(state.range(0));
  auto a = twisted_dolbeault(1, 8).symbol;
  for (auto _ : state) benchmark::DoNotOptimize(pushforward_ch(a, 0, 2, nz, 12, 24, 0));
}
BENCHMARK(BM_PushforwardChern)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_TraceTau(benchmark::State& state) {
  auto space = torus(static_cast<int>(state.range(0)));
  auto K = random_invariant_kernel(space, 1, 2, 1);
  auto c = compute_cutoff(space, constant_bump(space));
  auto omega = uniform_density(space);
  for (auto _ : state) benchmark::DoNotOptimize(trace_tau(space, K, c, omega));
}
BENCHMARK(BM_TraceTau)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
