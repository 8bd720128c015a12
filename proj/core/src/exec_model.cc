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

#include "gnnsim/exec_model.h"

#include <algorithm>
#include <limits>
#include <string>

#include "gnnsim/error.h"

namespace gnnsim {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) return kSaturated;
  return out;
}

void finalize(ExecMetrics& m) {
  m.end_to_end = m.gpu_time + m.host_time;
  m.hdoo = m.host_time;
  m.gpu_execution_fraction = m.end_to_end > 0.0 ? m.gpu_time / m.end_to_end : 0.0;
}

double gpu_work(const PipelineGraph& pipeline, const IterationMetadata& metadata) {
  double total = 0.0;
  for (const KernelSpec& k : pipeline.kernels) {
    total += device_time(k, metadata, pipeline.feature_dim);
  }
  return total;
}

void check_hops(const PipelineGraph& pipeline, const IterationMetadata& metadata) {
  if (metadata.num_hops() != pipeline.num_hops()) {
    throw ConfigError("metadata has " + std::to_string(metadata.num_hops()) +
                      " hops, pipeline has " + std::to_string(pipeline.num_hops()));
  }
}

std::vector<std::uint64_t> envelope_grids(const PipelineGraph& pipeline,
                                          const EnvelopeSpec& envelope) {
  if (envelope.num_hops() != pipeline.num_hops()) {
    throw ConfigError("envelope hop count does not match the pipeline");
  }
  std::vector<std::uint64_t> grids;
  grids.reserve(pipeline.kernels.size());
  for (const KernelSpec& k : pipeline.kernels) {
    grids.push_back(k.grid.kind == SizeRef::Kind::kNone
                        ? 1
                        : grid_size(resolve_bound(k.grid, envelope),
                                    pipeline.block_quota));
  }
  return grids;
}

ExecMetrics replay_metrics(const PipelineGraph& pipeline,
                           std::span<const std::uint64_t> grid_max,
                           const IterationMetadata& metadata,
                           const CostModel& cost) {
  ExecMetrics m;
  for (std::size_t i = 0; i < pipeline.kernels.size(); ++i) {
    const KernelSpec& k = pipeline.kernels[i];
    m.gpu_time += device_time(k, metadata, pipeline.feature_dim);
    if (k.grid.kind == SizeRef::Kind::kNone) continue;
    const std::uint64_t actual =
        grid_size(resolve(k.grid, metadata), pipeline.block_quota);
    const double extra = early_exit_overhead(grid_max[i], actual, cost);
    m.gpu_time += extra;
    m.early_exit_time += extra;
  }
  m.host_time = cost.graph_replay_latency + cost.host_logic_latency;
  m.launches = 1;
  m.syncs = 0;
  finalize(m);
  return m;
}

const IterationMetadata& effective(const IterationMetadata& metadata,
                                   const EnvelopeSpec& envelope,
                                   const IterationMetadata* safe,
                                   std::uint64_t* overflows) {
  if (!check_overflow(metadata, envelope).any()) return metadata;
  if (safe == nullptr) {
    throw ConfigError("iteration overflows the envelope and no safe iteration is cached");
  }
  if (overflows) ++*overflows;
  return *safe;
}

void check_safe(const IterationMetadata* safe, const EnvelopeSpec& envelope) {
  if (safe && check_overflow(*safe, envelope).any()) {
    throw ConfigError(
        "warm-up iteration exceeds the envelope; increase safety_factor");
  }
}

}  // namespace

std::string to_string(KernelStage stage) {
  switch (stage) {
    case KernelStage::kPreSample: return "pre_sample";
    case KernelStage::kSample: return "sample";
    case KernelStage::kRelabel: return "relabel";
    case KernelStage::kScan: return "scan";
    case KernelStage::kBuild: return "build";
    case KernelStage::kGather: return "gather";
    case KernelStage::kForward: return "forward";
    case KernelStage::kBackward: return "backward";
  }
  return "unknown";
}

KernelStage parse_kernel_stage(std::string_view name) {
  for (KernelStage s : kAllStages) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown kernel stage '" + std::string(name) + "'");
}

void CostModel::validate() const {
  const double scalars[] = {host_launch_latency, sync_export_latency,
                            host_logic_latency, graph_replay_latency,
                            pilot_child_launch_latency, early_exit_block_cost};
  for (double v : scalars) {
    if (!(v >= 0.0)) throw ConfigError("cost model latencies must be >= 0");
  }
  if (block_quota < 2) throw ConfigError("block_quota must be at least 2");
  for (const auto& [stage, c] : kernels) {
    if (!(c.a >= 0.0 && c.b_v >= 0.0 && c.b_e >= 0.0 && c.b_f >= 0.0)) {
      throw ConfigError("kernel coefficients for " + to_string(stage) +
                        " must be >= 0");
    }
  }
}

KernelCoefficients CostModel::coefficients(KernelStage stage) const {
  const auto it = kernels.find(stage);
  return it == kernels.end() ? KernelCoefficients{} : it->second;
}

std::uint64_t resolve(const SizeRef& ref, const IterationMetadata& metadata) {
  const auto hop_index = [&]() -> std::size_t {
    if (ref.hop == 0 || ref.hop > metadata.num_hops()) {
      throw IndexError("hop " + std::to_string(ref.hop) + " out of range");
    }
    return ref.hop - 1;
  };
  switch (ref.kind) {
    case SizeRef::Kind::kNone: return 0;
    case SizeRef::Kind::kBatch: return metadata.batch_size;
    case SizeRef::Kind::kFrontier: return metadata.frontier_size(ref.hop);
    case SizeRef::Kind::kHopEdges: return metadata.per_hop_edge_counts[hop_index()];
    case SizeRef::Kind::kHopVertices: return metadata.per_hop_vertex_counts[hop_index()];
    case SizeRef::Kind::kTotalVertices: return metadata.total_unique_vertices;
  }
  return 0;
}

std::uint64_t resolve_bound(const SizeRef& ref, const EnvelopeSpec& envelope) {
  const auto hop_index = [&]() -> std::size_t {
    if (ref.hop == 0 || ref.hop > envelope.num_hops()) {
      throw IndexError("hop " + std::to_string(ref.hop) + " out of range");
    }
    return ref.hop - 1;
  };
  switch (ref.kind) {
    case SizeRef::Kind::kNone: return 0;
    case SizeRef::Kind::kBatch: return envelope.batch_size;
    case SizeRef::Kind::kFrontier: return envelope.frontier_bound(ref.hop);
    case SizeRef::Kind::kHopEdges: return envelope.e_max_per_hop[hop_index()];
    case SizeRef::Kind::kHopVertices: return envelope.v_max_per_hop[hop_index()];
    case SizeRef::Kind::kTotalVertices: return envelope.v_max_total;
  }
  return 0;
}

std::size_t PipelineGraph::sync_edges() const {
  std::size_t n = 0;
  for (const KernelSpec& k : kernels) n += k.consumes_metadata.size();
  return n;
}

PipelineGraph build_pipeline(const SampleConfig& config, std::uint32_t layers,
                             std::uint32_t feature_dim, const CostModel& cost,
                             std::uint64_t num_vertices) {
  config.validate();
  cost.validate();
  if (layers < 1) throw ConfigError("layers must be at least 1");

  PipelineGraph p;
  p.batch_size = config.batch_size;
  p.fanouts = config.fanouts;
  p.layers = layers;
  p.feature_dim = feature_dim;
  p.block_quota = cost.block_quota;

  using K = SizeRef::Kind;
  const auto add = [&](std::uint32_t hop, KernelStage stage, std::string id,
                       SizeRef v, SizeRef e, SizeRef grid) -> KernelSpec& {
    KernelSpec k;
    k.id = std::move(id);
    k.stage = stage;
    k.hop = hop;
    k.cost = cost.coefficients(stage);
    k.vertices = v;
    k.edges = e;
    k.grid = grid;
    p.hop_structure[hop].push_back(p.kernels.size());
    p.kernels.push_back(std::move(k));
    return p.kernels.back();
  };

  const std::uint32_t n_hops = static_cast<std::uint32_t>(config.num_hops());
  const std::uint64_t cap = num_vertices == 0 ? kSaturated : num_vertices;
  std::uint64_t worst_frontier = config.batch_size;
  for (std::uint32_t h = 1; h <= n_hops; ++h) {
    const std::string tag = "hop" + std::to_string(h) + ".";
    const SizeRef frontier{K::kFrontier, h};
    const SizeRef edges{K::kHopEdges, h};
    const SizeRef none{};

    KernelSpec& pre = add(h, KernelStage::kPreSample, tag + "pre_sample",
                          frontier, none, frontier);
    if (h > 1) pre.consumes_metadata.push_back(hop_vertices_key(h - 1));
    pre.produces_metadata.push_back(hop_edges_key(h));

    KernelSpec& sample = add(h, KernelStage::kSample, tag + "sample", none, edges, edges);
    sample.consumes_metadata.push_back(hop_edges_key(h));

    KernelSpec& relabel = add(h, KernelStage::kRelabel, tag + "relabel", none, edges, edges);
    relabel.produces_metadata.push_back(hop_vertices_key(h));

    const std::uint64_t rounds =
        prefix_sum_rounds(std::min(worst_frontier, cap), cost.block_quota);
    for (std::uint64_t r = 1; r <= rounds; ++r) {
      add(h, KernelStage::kScan, tag + "scan" + std::to_string(r), frontier,
          none, frontier);
    }
    add(h, KernelStage::kBuild, tag + "build", frontier, edges, edges);
    worst_frontier = sat_mul(worst_frontier, config.fanouts[h - 1]);
  }

  KernelSpec& gather = add(0, KernelStage::kGather, "gather",
                           {K::kTotalVertices, 0}, {}, {K::kTotalVertices, 0});
  gather.consumes_metadata.push_back(hop_vertices_key(n_hops));

  // Layer l aggregates over hop block N - l + 1; layers beyond the hop count
  // reuse the first block.
  const auto block_of = [&](std::uint32_t l) {
    return l >= n_hops ? 1u : n_hops - l + 1;
  };
  for (std::uint32_t l = 1; l <= layers; ++l) {
    const std::uint32_t b = block_of(l);
    add(0, KernelStage::kForward, "layer" + std::to_string(l) + ".forward",
        {K::kHopVertices, b}, {K::kHopEdges, b}, {K::kHopEdges, b});
  }
  for (std::uint32_t l = layers; l >= 1; --l) {
    const std::uint32_t b = block_of(l);
    add(0, KernelStage::kBackward, "layer" + std::to_string(l) + ".backward",
        {K::kHopVertices, b}, {K::kHopEdges, b}, {K::kHopEdges, b});
  }
  return p;
}

double device_time(const KernelSpec& kernel, const IterationMetadata& metadata,
                   std::uint32_t feature_dim) {
  const double v = static_cast<double>(resolve(kernel.vertices, metadata));
  const double e = static_cast<double>(resolve(kernel.edges, metadata));
  const KernelCoefficients& c = kernel.cost;
  return c.a + c.b_v * v + c.b_e * e + c.b_f * v * feature_dim;
}

std::uint64_t grid_size(std::uint64_t n, std::uint64_t block_quota) {
  if (block_quota == 0) throw ConfigError("block quota must be positive");
  if (n == 0) return 1;
  return n / block_quota + (n % block_quota != 0);
}

double early_exit_overhead(std::uint64_t grid_max, std::uint64_t grid_actual,
                           const CostModel& cost) {
  if (grid_max < grid_actual) {
    throw LogicError("replay grid " + std::to_string(grid_max) +
                     " is smaller than the required " + std::to_string(grid_actual));
  }
  return static_cast<double>(grid_max - grid_actual) * cost.early_exit_block_cost;
}

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kHostMediated: return "host-mediated";
    case Strategy::kDevicePilot: return "device-pilot";
    case Strategy::kReplay: return "replay";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : kAllStrategies) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

ExecMetrics& ExecMetrics::operator+=(const ExecMetrics& other) {
  gpu_time += other.gpu_time;
  host_time += other.host_time;
  launches += other.launches;
  syncs += other.syncs;
  early_exit_time += other.early_exit_time;
  profile_opaque = profile_opaque || other.profile_opaque;
  finalize(*this);
  return *this;
}

ExecMetrics simulate_iteration(const PipelineGraph& pipeline, Strategy strategy,
                               const IterationMetadata& metadata,
                               const EnvelopeSpec* envelope,
                               const CostModel& cost) {
  check_hops(pipeline, metadata);
  ExecMetrics m;
  const std::size_t k = pipeline.kernels.size();
  switch (strategy) {
    case Strategy::kHostMediated:
      m.gpu_time = gpu_work(pipeline, metadata);
      m.syncs = pipeline.sync_edges();
      m.launches = k;
      m.host_time = static_cast<double>(k) *
                        (cost.host_launch_latency + cost.host_logic_latency) +
                    static_cast<double>(m.syncs) * cost.sync_export_latency;
      break;
    case Strategy::kDevicePilot:
      m.gpu_time = gpu_work(pipeline, metadata);
      m.launches = 1;
      m.host_time = cost.host_launch_latency + cost.host_logic_latency +
                    static_cast<double>(k - 1) * cost.pilot_child_launch_latency;
      m.profile_opaque = true;
      break;
    case Strategy::kReplay: {
      if (envelope == nullptr) throw ConfigError("replay requires an envelope");
      const auto grids = envelope_grids(pipeline, *envelope);
      return replay_metrics(pipeline, grids, metadata, cost);
    }
  }
  finalize(m);
  return m;
}

ReplayGraph capture_replay(const PipelineGraph& pipeline,
                           const EnvelopeSpec& envelope,
                           const BufferArena& arena) {
  if (!arena.warmed_up()) {
    throw ConfigError("capture requires a completed warm-up iteration");
  }
  ReplayGraph g;
  g.grid_max = envelope_grids(pipeline, envelope);
  g.pipeline = pipeline;
  g.buffer_ids = arena.buffer_ids();
  g.envelope = envelope;
  return g;
}

ExecMetrics replay(const ReplayGraph& graph, const BufferArena& arena,
                   const EnvelopeSpec& envelope,
                   const IterationMetadata& metadata, const CostModel& cost) {
  if (arena.buffer_ids() != graph.buffer_ids) {
    throw ReplayInvalidationError(
        "arena buffers were reallocated after capture");
  }
  if (!(envelope == graph.envelope)) {
    throw ReplayInvalidationError("envelope changed after capture");
  }
  check_hops(graph.pipeline, metadata);
  if (envelope_grids(graph.pipeline, envelope) != graph.grid_max) {
    throw ReplayInvalidationError("launch grids changed after capture");
  }
  return replay_metrics(graph.pipeline, graph.grid_max, metadata, cost);
}

EpochMetrics simulate_epoch(const PipelineGraph& pipeline, Strategy strategy,
                            std::span<const IterationMetadata> iterations,
                            const EnvelopeSpec* envelope,
                            const IterationMetadata* safe, const CostModel& cost) {
  EpochMetrics out;
  if (strategy == Strategy::kReplay) {
    if (envelope == nullptr) throw ConfigError("replay requires an envelope");
    check_safe(safe, *envelope);
  }
  for (const IterationMetadata& md : iterations) {
    const IterationMetadata& use =
        strategy == Strategy::kReplay ? effective(md, *envelope, safe, &out.overflows)
                                      : md;
    out.total += simulate_iteration(pipeline, strategy, use, envelope, cost);
    ++out.iterations;
  }
  return out;
}

EpochMetrics replay_epoch(const ReplayGraph& graph, BufferArena& arena,
                          const EnvelopeSpec& envelope,
                          std::span<const IterationMetadata> iterations,
                          const IterationMetadata& safe, const CostModel& cost) {
  EpochMetrics out;
  const std::uint64_t before = arena.fallback_count();
  for (const IterationMetadata& md : iterations) {
    const IterationOutcome outcome =
        run_iteration_with_fallback(arena, envelope, md, safe);
    const IterationMetadata& use = outcome == IterationOutcome::kNormal ? md : safe;
    out.total += replay(graph, arena, envelope, use, cost);
    ++out.iterations;
  }
  out.overflows = arena.fallback_count() - before;
  return out;
}

ExecMetrics simulate_data_parallel(const PipelineGraph& worker_pipeline,
                                   Strategy strategy,
                                   std::span<const IterationMetadata> per_worker,
                                   const EnvelopeSpec* envelope,
                                   const IterationMetadata* safe,
                                   double allreduce_cost, const CostModel& cost) {
  if (per_worker.empty()) throw ConfigError("at least one worker is required");
  if (!(allreduce_cost >= 0.0)) throw ConfigError("allreduce_cost must be >= 0");
  if (strategy == Strategy::kReplay) {
    if (envelope == nullptr) throw ConfigError("replay requires an envelope");
    check_safe(safe, *envelope);
  }
  ExecMetrics slowest;
  bool first = true;
  for (const IterationMetadata& md : per_worker) {
    const IterationMetadata& use =
        strategy == Strategy::kReplay ? effective(md, *envelope, safe, nullptr) : md;
    const ExecMetrics m = simulate_iteration(worker_pipeline, strategy, use, envelope, cost);
    if (first || m.end_to_end > slowest.end_to_end) slowest = m;
    first = false;
  }
  slowest.gpu_time += allreduce_cost;
  finalize(slowest);
  return slowest;
}

}  // namespace gnnsim
