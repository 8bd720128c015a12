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

#ifndef GNNSIM_EXEC_MODEL_H_
#define GNNSIM_EXEC_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gnnsim/envelope.h"
#include "gnnsim/provisioning.h"
#include "gnnsim/sampler.h"

namespace gnnsim {

enum class KernelStage {
  kPreSample,
  kSample,
  kRelabel,
  kScan,
  kBuild,
  kGather,
  kForward,
  kBackward,
};

inline constexpr KernelStage kAllStages[] = {
    KernelStage::kPreSample, KernelStage::kSample,  KernelStage::kRelabel,
    KernelStage::kScan,      KernelStage::kBuild,   KernelStage::kGather,
    KernelStage::kForward,   KernelStage::kBackward};

std::string to_string(KernelStage stage);
KernelStage parse_kernel_stage(std::string_view name);

// Device time = a + b_v*|V| + b_e*|E| + b_f*|V|*feature_dim.
struct KernelCoefficients {
  double a = 0.0;
  double b_v = 0.0;
  double b_e = 0.0;
  double b_f = 0.0;

  friend bool operator==(const KernelCoefficients&,
                         const KernelCoefficients&) = default;
};

struct CostModel {
  double host_launch_latency = 0.0;
  double sync_export_latency = 0.0;
  double host_logic_latency = 0.0;
  double graph_replay_latency = 0.0;
  double pilot_child_launch_latency = 0.0;
  double early_exit_block_cost = 0.0;
  std::uint64_t block_quota = 256;
  std::map<KernelStage, KernelCoefficients> kernels;

  // Throws ConfigError on a negative coefficient or block_quota < 2.
  void validate() const;
  // Zero coefficients for stages not listed.
  KernelCoefficients coefficients(KernelStage stage) const;

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

// Throws ParseError on malformed JSON, ConfigError on unknown keys or
// invalid values.
CostModel cost_model_from_json(const std::string& text);
CostModel load_cost_model(const std::filesystem::path& path);
// `notes` is stored verbatim when non-empty.
std::string cost_model_to_json(const CostModel& cost, const std::string& notes = "");

// A runtime size a kernel depends on.
struct SizeRef {
  enum class Kind { kNone, kBatch, kFrontier, kHopEdges, kHopVertices, kTotalVertices };
  Kind kind = Kind::kNone;
  std::uint32_t hop = 0;  // 1-based, for the per-hop kinds

  friend bool operator==(const SizeRef&, const SizeRef&) = default;
};

// Realized value of `ref` in an iteration.
std::uint64_t resolve(const SizeRef& ref, const IterationMetadata& metadata);
// Envelope bound on `ref`.
std::uint64_t resolve_bound(const SizeRef& ref, const EnvelopeSpec& envelope);

struct KernelSpec {
  std::string id;
  KernelStage stage = KernelStage::kPreSample;
  std::uint32_t hop = 0;  // 0 for gather and training kernels
  KernelCoefficients cost;
  SizeRef vertices;
  SizeRef edges;
  SizeRef grid;
  std::vector<std::string> consumes_metadata;
  std::vector<std::string> produces_metadata;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

// Kernels in dependency order. Per hop: pre_sample (produces hopH.edges),
// sample, relabel (produces hopH.vertices), the scan rounds and build; then
// gather and the training kernels. Each metadata key is consumed by exactly
// one kernel, the first whose launch or allocation needs it.
struct PipelineGraph {
  std::uint32_t batch_size = 0;
  std::vector<std::uint32_t> fanouts;
  std::uint32_t layers = 0;
  std::uint32_t feature_dim = 0;
  std::uint64_t block_quota = 256;
  std::vector<KernelSpec> kernels;
  // hop -> indices into kernels (hop 0 holds gather and training).
  std::map<std::uint32_t, std::vector<std::size_t>> hop_structure;

  std::size_t num_hops() const { return fanouts.size(); }
  std::size_t sync_edges() const;

  friend bool operator==(const PipelineGraph&, const PipelineGraph&) = default;
};

// Scan round counts come from the worst-case frontier min(B*prod F, n) so
// the launch skeleton does not depend on runtime metadata. num_vertices = 0
// means unbounded.
PipelineGraph build_pipeline(const SampleConfig& config, std::uint32_t layers,
                             std::uint32_t feature_dim, const CostModel& cost,
                             std::uint64_t num_vertices = 0);

double device_time(const KernelSpec& kernel, const IterationMetadata& metadata,
                   std::uint32_t feature_dim);

// ceil(n / T), minimum 1. Throws ConfigError when T == 0.
std::uint64_t grid_size(std::uint64_t n, std::uint64_t block_quota);

// Throws LogicError when grid_max < grid_actual.
double early_exit_overhead(std::uint64_t grid_max, std::uint64_t grid_actual,
                           const CostModel& cost);

enum class Strategy { kHostMediated, kDevicePilot, kReplay };

inline constexpr Strategy kAllStrategies[] = {
    Strategy::kHostMediated, Strategy::kDevicePilot, Strategy::kReplay};

std::string to_string(Strategy strategy);
Strategy parse_strategy(std::string_view name);

struct ExecMetrics {
  double end_to_end = 0.0;
  double gpu_time = 0.0;
  double host_time = 0.0;
  std::uint64_t launches = 0;
  std::uint64_t syncs = 0;
  double gpu_execution_fraction = 0.0;
  double hdoo = 0.0;
  // Part of gpu_time spent in early-exiting surplus blocks.
  double early_exit_time = 0.0;
  // GPU time cannot be profiled under device-side launches; reports should
  // suppress the fraction.
  bool profile_opaque = false;

  ExecMetrics& operator+=(const ExecMetrics& other);
  friend bool operator==(const ExecMetrics&, const ExecMetrics&) = default;
};

// Serialized timing: end_to_end = gpu_time + host_time.
//   HostMediated: every kernel costs one launch and one logic step on the
//     host, every metadata key one sync export.
//   DevicePilot: one host launch and logic step for the pilot, which runs the
//     first stage itself and launches the remaining kernels as children.
//   Replay: one graph launch and one logic step; grids are sized by the
//     envelope and surplus blocks exit early.
// Throws ConfigError for Replay without an envelope.
ExecMetrics simulate_iteration(const PipelineGraph& pipeline, Strategy strategy,
                               const IterationMetadata& metadata,
                               const EnvelopeSpec* envelope,
                               const CostModel& cost);

// Fixed launch skeleton recorded against an arena.
struct ReplayGraph {
  PipelineGraph pipeline;
  std::vector<std::uint64_t> grid_max;
  std::map<std::string, std::uint64_t> buffer_ids;
  EnvelopeSpec envelope;
};

// Throws ConfigError unless the arena has been warmed up and the envelope
// matches the pipeline's hop count.
ReplayGraph capture_replay(const PipelineGraph& pipeline,
                           const EnvelopeSpec& envelope,
                           const BufferArena& arena);

// Throws ReplayInvalidationError if any buffer id or the envelope differs
// from capture time.
ExecMetrics replay(const ReplayGraph& graph, const BufferArena& arena,
                   const EnvelopeSpec& envelope,
                   const IterationMetadata& metadata, const CostModel& cost);

struct EpochMetrics {
  ExecMetrics total;
  std::uint64_t iterations = 0;
  std::uint64_t overflows = 0;
};

// Sums per-iteration metrics. Under Replay, iterations that overflow the
// envelope are replaced by `safe` and counted; other strategies ignore the
// envelope. Throws ConfigError if `safe` itself overflows.
EpochMetrics simulate_epoch(const PipelineGraph& pipeline, Strategy strategy,
                            std::span<const IterationMetadata> iterations,
                            const EnvelopeSpec* envelope,
                            const IterationMetadata* safe, const CostModel& cost);

// Replay epoch driven through an arena and a captured graph. Overflowing
// iterations fall back to the arena's safe iteration.
EpochMetrics replay_epoch(const ReplayGraph& graph, BufferArena& arena,
                          const EnvelopeSpec& envelope,
                          std::span<const IterationMetadata> iterations,
                          const IterationMetadata& safe, const CostModel& cost);

// One data-parallel step: every worker runs its own iteration, the step
// waits for the slowest one, then pays allreduce_cost on the device.
// Overflowing worker iterations under Replay use `safe`.
ExecMetrics simulate_data_parallel(const PipelineGraph& worker_pipeline,
                                   Strategy strategy,
                                   std::span<const IterationMetadata> per_worker,
                                   const EnvelopeSpec* envelope,
                                   const IterationMetadata* safe,
                                   double allreduce_cost, const CostModel& cost);

}  // namespace gnnsim

#endif  // GNNSIM_EXEC_MODEL_H_
