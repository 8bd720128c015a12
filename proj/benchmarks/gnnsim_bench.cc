// Copyright 2026 The gnnsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <iterator>
#include <vector>

#include "gnnsim/envelope.h"
#include "gnnsim/exec_model.h"
#include "gnnsim/graph.h"
#include "gnnsim/sampler.h"

namespace gnnsim {
namespace {

const CsrGraph& bench_graph() {
  static const CsrGraph g = generate({GraphKind::kPowerLaw, 100000, 2'000'000, 2.1}, 7);
  return g;
}

void BM_SampleIteration(benchmark::State& state) {
  const CsrGraph& g = bench_graph();
  const SampleConfig c{static_cast<std::uint32_t>(state.range(0)), {10, 10}, 0};
  std::uint64_t i = 0;
  for (auto _ : state) {
    Rng rng(derive_seed(1, i++));
    benchmark::DoNotOptimize(sample_iteration(g, c, rng));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleIteration)->Arg(64)->Arg(512)->Arg(4096);

void BM_ComputeEnvelope(benchmark::State& state) {
  const CsrGraph& g = bench_graph();
  const SampleConfig c{256, std::vector<std::uint32_t>(state.range(0), 10), 0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_envelope(g, c, 0.999, 1000));
  }
}
BENCHMARK(BM_ComputeEnvelope)->DenseRange(1, 3);

void BM_PbExactDistribution(benchmark::State& state) {
  std::vector<double> p(state.range(0));
  Rng rng(3);
  for (double& x : p) x = rng.uniform01();
  for (auto _ : state) {
    benchmark::DoNotOptimize(pb_exact_distribution(p));
  }
}
BENCHMARK(BM_PbExactDistribution)->Arg(100)->Arg(1000)->Arg(10000);

void BM_NormalQuantile(benchmark::State& state) {
  // Mix of central and tail points.
  const double qs[] = {1e-9, 0.001, 0.02, 0.3, 0.5, 0.8, 0.975, 0.999999};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_quantile(qs[i++ % std::size(qs)]));
  }
}
BENCHMARK(BM_NormalQuantile);

void BM_SimulateIteration(benchmark::State& state) {
  const CsrGraph& g = bench_graph();
  const SampleConfig c{256, {10, 10}, 0};
  CostModel cost;
  for (KernelStage s : kAllStages) cost.kernels[s] = {1.0, 0.01, 0.01, 0.0};
  const PipelineGraph p = build_pipeline(c, 2, 128, cost, g.num_vertices());
  const EnvelopeSpec env = compute_envelope(g, c, 0.999, 1000);
  Rng rng(5);
  const IterationMetadata md = sample_iteration(g, c, rng).metadata;
  const auto strategy = static_cast<Strategy>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_iteration(p, strategy, md, &env, cost));
  }
}
BENCHMARK(BM_SimulateIteration)->DenseRange(0, 2);

}  // namespace
}  // namespace gnnsim

BENCHMARK_MAIN();
