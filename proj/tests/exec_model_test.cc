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

#include <gtest/gtest.h>

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "gnnsim/envelope.h"
#include "gnnsim/error.h"
#include "gnnsim/exec_model.h"
#include "gnnsim/experiment.h"
#include "gnnsim/provisioning.h"

namespace gnnsim {
namespace {

// Round numbers so closed forms are exact.
CostModel unit_cost() {
  CostModel c;
  c.host_launch_latency = 5.0;
  c.sync_export_latency = 20.0;
  c.host_logic_latency = 1.0;
  c.graph_replay_latency = 3.0;
  c.pilot_child_launch_latency = 2.0;
  c.early_exit_block_cost = 0.5;
  c.block_quota = 4;
  for (KernelStage s : kAllStages) c.kernels[s] = {1.0, 0.0, 0.0, 0.0};
  c.kernels[KernelStage::kSample] = {1.0, 0.0, 0.25, 0.0};
  c.kernels[KernelStage::kGather] = {1.0, 0.0, 0.0, 0.125};
  return c;
}

IterationMetadata md(std::uint32_t b, std::vector<std::uint64_t> v,
                     std::vector<std::uint64_t> e) {
  IterationMetadata m;
  m.batch_size = b;
  m.per_hop_vertex_counts = std::move(v);
  m.per_hop_edge_counts = std::move(e);
  m.total_unique_vertices = m.per_hop_vertex_counts.back();
  for (auto x : m.per_hop_edge_counts) m.total_edges += x;
  return m;
}

EnvelopeSpec envelope(std::uint32_t b, std::vector<std::uint64_t> v,
                      std::vector<std::uint64_t> e) {
  EnvelopeSpec s;
  s.batch_size = b;
  s.v_max_per_hop = std::move(v);
  s.e_max_per_hop = std::move(e);
  s.v_max_total = s.v_max_per_hop.back();
  s.fanouts.resize(s.v_max_per_hop.size(), 1);
  s.num_vertices = 1000;
  return s;
}

std::vector<std::string> ids(const PipelineGraph& p) {
  std::vector<std::string> out;
  for (const auto& k : p.kernels) out.push_back(k.id);
  return out;
}

TEST(Pipeline, TwoHopStructure) {
  const PipelineGraph p = build_pipeline({2, {3, 2}, 0}, 2, 8, unit_cost());
  EXPECT_EQ(ids(p), (std::vector<std::string>{
                        "hop1.pre_sample", "hop1.sample", "hop1.relabel", "hop1.scan1",
                        "hop1.build", "hop2.pre_sample", "hop2.sample", "hop2.relabel",
                        "hop2.scan1", "hop2.scan2", "hop2.scan3", "hop2.build", "gather",
                        "layer1.forward", "layer2.forward", "layer2.backward",
                        "layer1.backward"}));
  EXPECT_EQ(p.sync_edges(), 4u);
  EXPECT_EQ(p.hop_structure.at(1).size(), 5u);
  EXPECT_EQ(p.hop_structure.at(0).size(), 5u);
  // Layer 1 runs over the outermost block.
  EXPECT_EQ(p.kernels[13].vertices, (SizeRef{SizeRef::Kind::kHopVertices, 2}));
  EXPECT_EQ(p.kernels[14].edges, (SizeRef{SizeRef::Kind::kHopEdges, 1}));
}

TEST(Pipeline, EveryMetadataKeyConsumedOnce) {
  for (std::size_t hops = 1; hops <= 4; ++hops) {
    const PipelineGraph p =
        build_pipeline({64, std::vector<std::uint32_t>(hops, 10), 0}, 3, 16, unit_cost());
    EXPECT_EQ(p.sync_edges(), 2 * hops);
    std::vector<std::string> consumed, produced;
    for (const auto& k : p.kernels) {
      consumed.insert(consumed.end(), k.consumes_metadata.begin(), k.consumes_metadata.end());
      produced.insert(produced.end(), k.produces_metadata.begin(), k.produces_metadata.end());
    }
    auto keys = metadata_keys(hops);
    std::sort(keys.begin(), keys.end());
    std::sort(consumed.begin(), consumed.end());
    std::sort(produced.begin(), produced.end());
    EXPECT_EQ(consumed, keys);
    EXPECT_EQ(produced, keys);
  }
}

TEST(Pipeline, ScanRoundsUseClampedWorstCase) {
  const auto scans = [](const PipelineGraph& p) {
    return std::count_if(p.kernels.begin(), p.kernels.end(), [](const KernelSpec& k) {
      return k.stage == KernelStage::kScan && k.hop == 2;
    });
  };
  // Worst frontier at hop 2 is 64: rounds(64, 4) = 5, rounds(10, 4) = 3.
  EXPECT_EQ(scans(build_pipeline({8, {8, 2}, 0}, 1, 4, unit_cost())), 5);
  EXPECT_EQ(scans(build_pipeline({8, {8, 2}, 0}, 1, 4, unit_cost(), 10)), 3);
}

TEST(Pipeline, Errors) {
  EXPECT_THROW(build_pipeline({2, {3}, 0}, 0, 8, unit_cost()), ConfigError);
  EXPECT_THROW(build_pipeline({0, {3}, 0}, 1, 8, unit_cost()), ConfigError);
  CostModel bad = unit_cost();
  bad.kernels[KernelStage::kScan].b_v = -1.0;
  EXPECT_THROW(build_pipeline({2, {3}, 0}, 1, 8, bad), ConfigError);
}

TEST(Grid, SizeAndEarlyExit) {
  EXPECT_EQ(grid_size(0, 256), 1u);
  EXPECT_EQ(grid_size(256, 256), 1u);
  EXPECT_EQ(grid_size(257, 256), 2u);
  EXPECT_THROW(grid_size(5, 0), ConfigError);
  const CostModel c = unit_cost();
  EXPECT_EQ(early_exit_overhead(7, 7, c), 0.0);
  EXPECT_EQ(early_exit_overhead(7, 3, c), 2.0);
  EXPECT_THROW(early_exit_overhead(2, 3, c), LogicError);
}

TEST(DeviceTime, LinearForm) {
  KernelSpec k;
  k.cost = {2.0, 0.5, 0.25, 0.01};
  k.vertices = {SizeRef::Kind::kTotalVertices, 0};
  k.edges = {SizeRef::Kind::kHopEdges, 1};
  EXPECT_DOUBLE_EQ(device_time(k, md(2, {10}, {8}), 100), 2.0 + 5.0 + 2.0 + 10.0);
}

TEST(Resolve, RealizedAndBound) {
  const IterationMetadata m = md(2, {5, 9}, {6, 11});
  EXPECT_EQ(resolve({SizeRef::Kind::kFrontier, 2}, m), 3u);
  EXPECT_EQ(resolve({SizeRef::Kind::kBatch, 0}, m), 2u);
  EXPECT_THROW(resolve({SizeRef::Kind::kHopEdges, 3}, m), IndexError);
  const EnvelopeSpec e = envelope(2, {6, 10}, {6, 12});
  EXPECT_EQ(resolve_bound({SizeRef::Kind::kFrontier, 2}, e), 4u);
  EXPECT_EQ(resolve_bound({SizeRef::Kind::kTotalVertices, 0}, e), 10u);
}

class StrategyTest : public ::testing::Test {
 protected:
  CostModel cost_ = unit_cost();
  PipelineGraph pipeline_ = build_pipeline({2, {3, 2}, 0}, 2, 8, cost_);
  IterationMetadata md_ = md(2, {5, 9}, {6, 8});
  EnvelopeSpec env_ = envelope(2, {8, 14}, {6, 12});
  std::size_t k_ = pipeline_.kernels.size();
  // 17 fixed terms, sample kernels 0.25 * (6 + 8), gather 0.125 * 9 * 8.
  double gpu_ = 17.0 + 3.5 + 9.0;
};

TEST_F(StrategyTest, HostMediatedClosedForm) {
  const ExecMetrics m = simulate_iteration(pipeline_, Strategy::kHostMediated, md_, nullptr, cost_);
  EXPECT_DOUBLE_EQ(m.gpu_time, gpu_);
  EXPECT_DOUBLE_EQ(m.host_time, 17.0 * 6.0 + 4.0 * 20.0);
  EXPECT_EQ(m.launches, k_);
  EXPECT_EQ(m.syncs, 4u);
  EXPECT_DOUBLE_EQ(m.end_to_end, m.gpu_time + m.host_time);
  EXPECT_DOUBLE_EQ(m.gpu_execution_fraction, m.gpu_time / m.end_to_end);
  EXPECT_DOUBLE_EQ(m.hdoo, m.host_time);
  EXPECT_FALSE(m.profile_opaque);
}

TEST_F(StrategyTest, DevicePilotClosedForm) {
  const ExecMetrics m = simulate_iteration(pipeline_, Strategy::kDevicePilot, md_, nullptr, cost_);
  EXPECT_DOUBLE_EQ(m.gpu_time, gpu_);
  EXPECT_DOUBLE_EQ(m.host_time, 6.0 + 16.0 * 2.0);
  EXPECT_EQ(m.launches, 1u);
  EXPECT_EQ(m.syncs, 0u);
  EXPECT_TRUE(m.profile_opaque);
}

TEST_F(StrategyTest, ReplayClosedForm) {
  EXPECT_THROW(simulate_iteration(pipeline_, Strategy::kReplay, md_, nullptr, cost_),
               ConfigError);
  const ExecMetrics m = simulate_iteration(pipeline_, Strategy::kReplay, md_, &env_, cost_);
  // Surplus blocks (T = 4): hop2 edges 12 vs 8 -> 3 vs 2 for sample,
  // relabel, build, layer1 fwd/bwd; total vertices 14 vs 9 -> 4 vs 3 for
  // gather. Frontier 6 vs 4 at hop 2 -> 2 vs 1 for pre_sample and 3 scans.
  const double surplus_blocks = 5.0 + 1.0 + 4.0;
  EXPECT_DOUBLE_EQ(m.early_exit_time, surplus_blocks * 0.5);
  EXPECT_DOUBLE_EQ(m.gpu_time, gpu_ + m.early_exit_time);
  EXPECT_DOUBLE_EQ(m.host_time, 4.0);
  EXPECT_EQ(m.launches, 1u);
  EXPECT_EQ(m.syncs, 0u);
}

TEST_F(StrategyTest, ExactEnvelopeHasNoEarlyExit) {
  const EnvelopeSpec tight = envelope(2, {5, 9}, {6, 8});
  const ExecMetrics m = simulate_iteration(pipeline_, Strategy::kReplay, md_, &tight, cost_);
  EXPECT_EQ(m.early_exit_time, 0.0);
  EXPECT_DOUBLE_EQ(m.gpu_time, gpu_);
}

TEST_F(StrategyTest, HopMismatch) {
  EXPECT_THROW(simulate_iteration(pipeline_, Strategy::kHostMediated, md(2, {5}, {6}),
                                  nullptr, cost_),
               ConfigError);
}

class ReplayTest : public StrategyTest {
 protected:
  void SetUp() override {
    arena_ = std::make_unique<BufferArena>(envelope_plan(env_, 8, 2), metadata_keys(2));
    safe_ = md(2, {6, 10}, {6, 10});
  }
  std::unique_ptr<BufferArena> arena_;
  IterationMetadata safe_;
};

TEST_F(ReplayTest, CaptureNeedsWarmUp) {
  EXPECT_THROW(capture_replay(pipeline_, env_, *arena_), ConfigError);
  warm_up(*arena_, env_, safe_);
  const ReplayGraph g = capture_replay(pipeline_, env_, *arena_);
  EXPECT_EQ(g.grid_max.size(), k_);
  EXPECT_EQ(replay(g, *arena_, env_, md_, cost_),
            simulate_iteration(pipeline_, Strategy::kReplay, md_, &env_, cost_));
}

TEST_F(ReplayTest, InvalidatedByReallocationOrEnvelopeChange) {
  warm_up(*arena_, env_, safe_);
  const ReplayGraph g = capture_replay(pipeline_, env_, *arena_);
  EnvelopeSpec other = env_;
  other.v_max_total += 1;
  EXPECT_THROW(replay(g, *arena_, other, md_, cost_), ReplayInvalidationError);
  arena_->reallocate("features", 1000);
  EXPECT_THROW(replay(g, *arena_, env_, md_, cost_), ReplayInvalidationError);
}

TEST_F(ReplayTest, EpochFallsBack) {
  warm_up(*arena_, env_, safe_);
  const ReplayGraph g = capture_replay(pipeline_, env_, *arena_);
  const std::vector<IterationMetadata> its{md_, md(2, {8, 15}, {6, 12}), md_};
  const EpochMetrics a = replay_epoch(g, *arena_, env_, its, safe_, cost_);
  const EpochMetrics b = simulate_epoch(pipeline_, Strategy::kReplay, its, &env_, &safe_, cost_);
  EXPECT_EQ(a.iterations, 3u);
  EXPECT_EQ(a.overflows, 1u);
  EXPECT_EQ(b.overflows, 1u);
  EXPECT_DOUBLE_EQ(a.total.end_to_end, b.total.end_to_end);
  EXPECT_EQ(a.total.launches, 3u);
  const IterationMetadata too_big = md(2, {8, 15}, {6, 12});
  EXPECT_THROW(simulate_epoch(pipeline_, Strategy::kReplay, its, &env_, &too_big, cost_),
               ConfigError);
}

TEST_F(StrategyTest, EpochSumsIterations) {
  const std::vector<IterationMetadata> its(4, md_);
  const EpochMetrics e = simulate_epoch(pipeline_, Strategy::kHostMediated, its, nullptr,
                                        nullptr, cost_);
  const ExecMetrics one =
      simulate_iteration(pipeline_, Strategy::kHostMediated, md_, nullptr, cost_);
  EXPECT_DOUBLE_EQ(e.total.end_to_end, 4.0 * one.end_to_end);
  EXPECT_EQ(e.total.syncs, 16u);
  EXPECT_EQ(e.overflows, 0u);
}

TEST_F(StrategyTest, DataParallelWaitsForSlowest) {
  const IterationMetadata big = md(2, {8, 14}, {6, 12});
  const std::vector<IterationMetadata> workers{md_, big};
  const ExecMetrics dp = simulate_data_parallel(pipeline_, Strategy::kHostMediated, workers,
                                                nullptr, nullptr, 7.0, cost_);
  const ExecMetrics slow =
      simulate_iteration(pipeline_, Strategy::kHostMediated, big, nullptr, cost_);
  EXPECT_DOUBLE_EQ(dp.gpu_time, slow.gpu_time + 7.0);
  EXPECT_DOUBLE_EQ(dp.host_time, slow.host_time);
  EXPECT_THROW(simulate_data_parallel(pipeline_, Strategy::kHostMediated, {}, nullptr,
                                      nullptr, 1.0, cost_),
               ConfigError);
  EXPECT_THROW(simulate_data_parallel(pipeline_, Strategy::kHostMediated, workers, nullptr,
                                      nullptr, -1.0, cost_),
               ConfigError);
}

TEST(CostModelJson, RoundTripAndStrictKeys) {
  const CostModel c = unit_cost();
  EXPECT_EQ(cost_model_from_json(cost_model_to_json(c, "hand-set")), c);
  EXPECT_THROW(cost_model_from_json(R"({"host_launch_latency": 1, "bogus": 2})"),
               ConfigError);
  EXPECT_THROW(cost_model_from_json(R"({"kernels": {"warp": {"a": 1}}})"), ConfigError);
  EXPECT_THROW(cost_model_from_json("[1,"), ParseError);
  EXPECT_THROW(cost_model_from_json(R"({"block_quota": 1})"), ConfigError);
}

TEST(CostModelJson, ShippedCalibrationMatchesBuiltIn) {
  EXPECT_EQ(load_cost_model(GNNSIM_SOURCE_DIR "/calibration/default.json"),
            default_cost_model());
}

TEST(Names, RoundTrip) {
  for (KernelStage s : kAllStages) EXPECT_EQ(parse_kernel_stage(to_string(s)), s);
  for (Strategy s : kAllStrategies) EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_THROW(parse_strategy("graph"), ConfigError);
}

}  // namespace
}  // namespace gnnsim
