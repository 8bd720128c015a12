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

#ifndef GNNSIM_EXPERIMENT_H_
#define GNNSIM_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gnnsim/envelope.h"
#include "gnnsim/exec_model.h"
#include "gnnsim/graph.h"
#include "gnnsim/provisioning.h"
#include "gnnsim/sampler.h"

namespace gnnsim {

// Seed tags: a command's seed is derive_seed(master_seed, tag), and its
// iteration i uses derive_seed(command_seed, i).
enum class SeedTag : std::uint64_t {
  kGraph = 1,
  kSampleStats = 2,
  kEnvelopeCheck = 3,
  kExecSim = 4,
  kMemoryCompare = 5,
};

std::uint64_t command_seed(std::uint64_t master_seed, SeedTag tag);

// Index used for the warm-up (cached safe) iteration of a command.
inline constexpr std::uint64_t kWarmupIteration = ~std::uint64_t{0};

struct GraphSource {
  // Generated when set; otherwise loaded from `path`.
  std::optional<GraphGenSpec> spec;
  std::filesystem::path path;
  // "edgelist" or "csr".
  std::string format = "edgelist";
  bool symmetrize = false;
  bool compact_ids = false;
};

struct EnvelopeParams {
  double confidence = 0.999;
  // Defaults to the configured iteration count.
  std::optional<std::uint64_t> repetitions;
  double safety_factor = 1.0;
};

struct SweepAxes {
  std::vector<std::uint32_t> batch_sizes;
  std::vector<std::uint32_t> depths;
  std::uint32_t depth_fanout = 10;
  std::vector<Strategy> strategies;
  std::vector<std::uint32_t> workers;
};

struct ExperimentConfig {
  GraphSource graph;
  SampleConfig sample;
  EnvelopeParams envelope;
  // Empty selects default_cost_model().
  std::filesystem::path cost_model;
  std::uint64_t iterations = 100;
  std::uint32_t layers = 2;
  std::uint32_t feature_dim = 128;
  SweepAxes sweep;
  double allreduce_cost = 1.0;
  std::filesystem::path output = "out";
  std::uint64_t master_seed = 0;

  std::uint64_t repetitions() const {
    return envelope.repetitions.value_or(iterations);
  }
  // Throws ConfigError on invalid values or empty sweep lists.
  void validate() const;
};

// Defaults: the sample batch and fanouts seed the sweep lists when the
// config leaves them out. Relative paths resolve against base_dir. Unknown
// keys are rejected with ConfigError.
ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// The calibrated model shipped as calibration/default.json.
CostModel default_cost_model();
CostModel resolve_cost_model(const ExperimentConfig& config);

CsrGraph load_graph(const GraphSource& source, std::uint64_t master_seed);

// ---------------------------------------------------------------------------
// sample-stats

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint64_t> counts;
};

// Equal-width bins over [min, max]; a constant sample lands in bin 0.
Histogram make_histogram(const std::vector<double>& values, std::size_t bins);

// Peaks are bins higher than their left neighbour and at least as high as
// their right one, with height >= min_peak_fraction of the tallest bin.
std::size_t count_peaks(const Histogram& histogram, double min_peak_fraction = 0.1);

struct SizeSummary {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  // (max - min) / mean.
  double spread = 0.0;
};

SizeSummary summarize(const std::vector<double>& values);

// `iterations` independent sampling iterations; iteration i uses
// Rng(derive_seed(seed, i)).
std::vector<IterationMetadata> sample_iterations(const CsrGraph& graph,
                                                 const SampleConfig& config,
                                                 std::uint64_t iterations,
                                                 std::uint64_t seed);

struct SampleStatsResult {
  std::vector<IterationMetadata> iterations;
  SizeSummary summary;
  Histogram histogram;
};

SampleStatsResult run_sample_stats(const CsrGraph& graph, const SampleConfig& config,
                                   std::uint64_t iterations, std::uint64_t seed);

// ---------------------------------------------------------------------------
// envelope-check

struct EnvelopeCheckResult {
  EnvelopeSpec envelope;
  std::uint64_t iterations = 0;
  double coverage = 0.0;
  // confidence - 3 * sqrt(p (1 - p) / iterations).
  double coverage_threshold = 0.0;
  bool coverage_pass = false;
  SizeSummary sizes;
  double spread_over_range_bound = 0.0;
  std::uint64_t overflow_count = 0;
};

EnvelopeCheckResult run_envelope_check(const CsrGraph& graph,
                                       const SampleConfig& config,
                                       const EnvelopeParams& params,
                                       std::uint64_t iterations,
                                       std::uint64_t seed);

// ---------------------------------------------------------------------------
// exec-sim

struct ExecSimRow {
  Strategy strategy = Strategy::kHostMediated;
  std::uint32_t batch = 0;
  std::uint32_t hops = 0;
  // Per-iteration means over the epoch.
  ExecMetrics mean;
  std::uint64_t overflows = 0;
  double speedup_vs_host = 0.0;
};

struct DataParallelRow {
  Strategy strategy = Strategy::kHostMediated;
  std::uint32_t batch = 0;
  std::uint32_t workers = 1;
  double single_time = 0.0;
  double parallel_time = 0.0;
  double speedup = 0.0;
};

struct ExecSimResult {
  std::vector<ExecSimRow> rows;
  std::vector<DataParallelRow> data_parallel;
};

// One epoch per (strategy, batch) and, for every worker count > 1 that
// divides the batch, a data-parallel epoch with batch / workers per worker.
ExecSimResult run_exec_sim(const CsrGraph& graph, const ExperimentConfig& config,
                           const CostModel& cost, std::uint64_t seed);

// ---------------------------------------------------------------------------
// memory-compare

struct MemoryCompareRow {
  PlanStrategy strategy = PlanStrategy::kMaxSG;
  std::uint32_t hops = 0;
  std::vector<std::uint32_t> fanouts;
  std::vector<std::uint64_t> vertex_caps;
  std::vector<std::uint64_t> edge_caps;
  std::uint64_t total_bytes = 0;
  double log2_vs_maxsg = 0.0;
};

// Elementwise maximum of the per-hop counts; the Exact plan of an epoch.
IterationMetadata peak_metadata(const std::vector<IterationMetadata>& iterations);

// For each depth N: fanouts = N copies of depth_fanout; MaxSG, Exact (peak
// over the sampled iterations) and Envelope plans.
std::vector<MemoryCompareRow> run_memory_compare(const CsrGraph& graph,
                                                 const ExperimentConfig& config,
                                                 std::uint64_t seed);

// ---------------------------------------------------------------------------
// calibration

// Scales every kernel's device coefficients so HostMediated at
// `config.sample` reaches `target_fraction`, then sets the early-exit block
// cost to `early_exit_share` of the cheapest per-block work among the
// grid-driving coefficients.
CostModel calibrate_cost_model(const CsrGraph& graph, const ExperimentConfig& config,
                               const CostModel& base, double target_fraction,
                               double early_exit_share, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Output

void write_sample_stats(const std::filesystem::path& dir, const SampleStatsResult& r);
void write_envelope_check(const std::filesystem::path& dir, const EnvelopeCheckResult& r);
void write_exec_sim(const std::filesystem::path& dir, const ExecSimResult& r);
void write_memory_compare(const std::filesystem::path& dir,
                          const std::vector<MemoryCompareRow>& rows);

// Runs every command into `dir` and writes manifest.json listing each file
// with the seed that produced it.
void run_sweep(const ExperimentConfig& config, const std::filesystem::path& dir);

}  // namespace gnnsim

#endif  // GNNSIM_EXPERIMENT_H_
