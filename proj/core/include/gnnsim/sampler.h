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

#ifndef GNNSIM_SAMPLER_H_
#define GNNSIM_SAMPLER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gnnsim/graph.h"
#include "gnnsim/rng.h"

namespace gnnsim {

using LocalId = std::uint32_t;

struct SampleConfig {
  std::uint32_t batch_size = 1;
  std::vector<std::uint32_t> fanouts;
  std::uint64_t seed = 0;

  std::size_t num_hops() const { return fanouts.size(); }
  // Throws ConfigError unless batch_size >= 1 and there is at least one hop.
  void validate() const;
};

struct LocalEdge {
  LocalId src = 0;
  LocalId dst = 0;

  friend bool operator==(const LocalEdge&, const LocalEdge&) = default;
};

// Per-hop sampled block. src_local is the hop's frontier; because fresh ids
// are handed out consecutively, every frontier is a contiguous id range.
// csr_offsets/csr_targets index rows by frontier position.
struct HopBlock {
  std::uint32_t hop_index = 0;  // 1-based
  std::vector<LocalId> src_local;
  std::vector<LocalId> dst_unique_local;
  std::vector<LocalEdge> edges;
  std::uint64_t raw_draw_count = 0;
  std::vector<std::uint64_t> csr_offsets;
  std::vector<LocalId> csr_targets;

  friend bool operator==(const HopBlock&, const HopBlock&) = default;
};

// Sampled vertex set with a dense local id space. Seeds occupy 0..B-1, later
// vertices receive ids in first-occurrence order.
class SampledSubgraph {
 public:
  SampledSubgraph() = default;

  // Starts a subgraph from distinct seed vertices. Throws ConfigError on a
  // repeated seed.
  explicit SampledSubgraph(std::span<const VertexId> seeds);

  std::size_t num_vertices() const { return local_to_global_.size(); }
  std::size_t num_seeds() const { return num_seeds_; }
  std::span<const VertexId> local_to_global() const { return local_to_global_; }
  std::optional<LocalId> local_id(VertexId global) const;
  std::span<const HopBlock> hops() const { return hops_; }

  // Returns the vertex's local id, assigning the next free id if unseen.
  LocalId intern(VertexId global, bool* inserted = nullptr);
  HopBlock& append_hop(HopBlock block);

  friend bool operator==(const SampledSubgraph& a, const SampledSubgraph& b) {
    return a.num_seeds_ == b.num_seeds_ &&
           a.local_to_global_ == b.local_to_global_ && a.hops_ == b.hops_;
  }

 private:
  std::size_t num_seeds_ = 0;
  std::vector<VertexId> local_to_global_;
  std::unordered_map<VertexId, LocalId> global_to_local_;
  std::vector<HopBlock> hops_;
};

// Runtime counts produced by one sampling iteration.
struct IterationMetadata {
  std::uint32_t batch_size = 0;
  // Cumulative unique vertices (seeds included) after each hop.
  std::vector<std::uint64_t> per_hop_vertex_counts;
  // Draws (= sampled edges) at each hop.
  std::vector<std::uint64_t> per_hop_edge_counts;
  std::uint64_t total_unique_vertices = 0;
  std::uint64_t total_edges = 0;

  std::size_t num_hops() const { return per_hop_vertex_counts.size(); }
  // Frontier size of hop h (1-based): B for hop 1, otherwise the number of
  // vertices first seen at hop h-1.
  std::uint64_t frontier_size(std::size_t hop) const;

  friend bool operator==(const IterationMetadata&,
                         const IterationMetadata&) = default;
};

struct SampleResult {
  SampledSubgraph subgraph;
  IterationMetadata metadata;
  // Global (src, dst) draws per hop; filled only when requested.
  std::vector<std::vector<Edge>> draw_log;
};

// `fanout` independent uniform draws with replacement from each frontier
// vertex's neighbor list, in frontier order. Zero-degree vertices draw
// nothing. Throws IndexError for an invalid frontier id.
std::vector<Edge> sample_hop(const CsrGraph& graph,
                             std::span<const VertexId> frontier,
                             std::uint32_t fanout, Rng& rng);

// Relabels one hop's draws into `subgraph` and appends the resulting block.
// Unseen destinations get fresh ids in first-occurrence order. Every source
// must already be local; throws LogicError otherwise.
const HopBlock& dedup_relabel(std::span<const VertexId> frontier,
                              std::span<const Edge> pairs,
                              SampledSubgraph& subgraph);

struct SubgraphCsr {
  std::vector<std::uint64_t> offsets;
  std::vector<LocalId> targets;
};

// Exclusive prefix sum of per-source counts, targets grouped by source and
// stable within a group. Throws IndexError if a source id >= num_local_src.
SubgraphCsr build_subgraph_csr(std::span<const LocalEdge> edges,
                               std::size_t num_local_src);

// B distinct vertices drawn uniformly without replacement (Floyd's
// algorithm), in draw order. Throws ConfigError if B > num_vertices.
std::vector<VertexId> select_seeds(const CsrGraph& graph,
                                   std::uint32_t batch_size, Rng& rng);

// One full iteration. Hop h draws with rng.substream(h); hop h+1's frontier
// is hop h's newly discovered vertices.
SampleResult sample_minibatch(const CsrGraph& graph, const SampleConfig& config,
                              std::span<const VertexId> seeds, Rng& rng,
                              bool record_draws = false);

// Seeds come from rng.substream(0).
SampleResult sample_iteration(const CsrGraph& graph, const SampleConfig& config,
                              Rng& rng, bool record_draws = false);

struct GatherIndices {
  std::vector<VertexId> feature_rows;
  std::vector<VertexId> label_rows;
};

// Feature rows cover every sampled vertex in local-id order; label rows are
// the seeds.
GatherIndices gather_indices(const SampledSubgraph& subgraph);

// Kernel invocations for a hierarchical scan over n items with block quota T:
// levels n, ceil(n/T), ... until a level fits one block; one scan kernel per
// level plus an add-offset kernel per non-final level. Throws ConfigError if
// T < 2.
std::uint64_t prefix_sum_rounds(std::uint64_t n, std::uint64_t block_quota);

// Debug dump: per-hop counts, local_to_global and edges as JSON.
std::string subgraph_to_json(const SampleResult& result);

}  // namespace gnnsim

#endif  // GNNSIM_SAMPLER_H_
