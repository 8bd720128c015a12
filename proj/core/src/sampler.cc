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

#include "gnnsim/sampler.h"

#include <string>
#include <unordered_set>

#include "gnnsim/error.h"

namespace gnnsim {

void SampleConfig::validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (fanouts.empty()) throw ConfigError("at least one hop (fanout) is required");
}

SampledSubgraph::SampledSubgraph(std::span<const VertexId> seeds) {
  local_to_global_.reserve(seeds.size());
  global_to_local_.reserve(seeds.size() * 4);
  for (VertexId s : seeds) {
    bool inserted = false;
    intern(s, &inserted);
    if (!inserted) {
      throw ConfigError("seed vertex " + std::to_string(s) + " repeated");
    }
  }
  num_seeds_ = seeds.size();
}

std::optional<LocalId> SampledSubgraph::local_id(VertexId global) const {
  const auto it = global_to_local_.find(global);
  if (it == global_to_local_.end()) return std::nullopt;
  return it->second;
}

LocalId SampledSubgraph::intern(VertexId global, bool* inserted) {
  const auto next = static_cast<LocalId>(local_to_global_.size());
  const auto [it, fresh] = global_to_local_.try_emplace(global, next);
  if (fresh) local_to_global_.push_back(global);
  if (inserted) *inserted = fresh;
  return it->second;
}

HopBlock& SampledSubgraph::append_hop(HopBlock block) {
  hops_.push_back(std::move(block));
  return hops_.back();
}

std::uint64_t IterationMetadata::frontier_size(std::size_t hop) const {
  if (hop == 0 || hop > num_hops()) {
    throw IndexError("hop " + std::to_string(hop) + " out of range");
  }
  if (hop == 1) return batch_size;
  const std::uint64_t before =
      hop == 2 ? batch_size : per_hop_vertex_counts[hop - 3];
  return per_hop_vertex_counts[hop - 2] - before;
}

std::vector<Edge> sample_hop(const CsrGraph& graph,
                             std::span<const VertexId> frontier,
                             std::uint32_t fanout, Rng& rng) {
  std::vector<Edge> pairs;
  if (fanout == 0) return pairs;
  const std::size_t n = graph.num_vertices();
  for (VertexId u : frontier) {
    if (u >= n) throw IndexError("frontier vertex " + std::to_string(u) + " out of range");
    const auto neighbors = graph.neighbors(u);
    if (neighbors.empty()) continue;
    for (std::uint32_t k = 0; k < fanout; ++k) {
      pairs.push_back({u, neighbors[rng.uniform_below(neighbors.size())]});
    }
  }
  return pairs;
}

SubgraphCsr build_subgraph_csr(std::span<const LocalEdge> edges,
                               std::size_t num_local_src) {
  SubgraphCsr csr;
  csr.offsets.assign(num_local_src + 1, 0);
  for (const LocalEdge& e : edges) {
    if (e.src >= num_local_src) {
      throw IndexError("edge source " + std::to_string(e.src) +
                       " >= num_local_src " + std::to_string(num_local_src));
    }
    ++csr.offsets[e.src + 1];
  }
  for (std::size_t i = 0; i < num_local_src; ++i) {
    csr.offsets[i + 1] += csr.offsets[i];
  }
  csr.targets.resize(edges.size());
  std::vector<std::uint64_t> cursor(csr.offsets.begin(), csr.offsets.end() - 1);
  for (const LocalEdge& e : edges) csr.targets[cursor[e.src]++] = e.dst;
  return csr;
}

const HopBlock& dedup_relabel(std::span<const VertexId> frontier,
                              std::span<const Edge> pairs,
                              SampledSubgraph& subgraph) {
  HopBlock block;
  block.hop_index = static_cast<std::uint32_t>(subgraph.hops().size() + 1);
  block.src_local.reserve(frontier.size());
  for (VertexId u : frontier) {
    const auto local = subgraph.local_id(u);
    if (!local) {
      throw LogicError("frontier vertex " + std::to_string(u) +
                       " is not in the subgraph");
    }
    block.src_local.push_back(*local);
  }

  // Frontier rows are a contiguous id range whenever the frontier came from
  // the previous hop's fresh ids; fall back to a lookup table otherwise.
  bool contiguous = true;
  for (std::size_t i = 1; i < block.src_local.size(); ++i) {
    if (block.src_local[i] != block.src_local[0] + i) {
      contiguous = false;
      break;
    }
  }
  std::unordered_map<LocalId, LocalId> row_of;
  if (!contiguous) {
    for (std::size_t i = 0; i < block.src_local.size(); ++i) {
      row_of.try_emplace(block.src_local[i], static_cast<LocalId>(i));
    }
  }
  const LocalId first = block.src_local.empty() ? 0 : block.src_local.front();

  block.edges.reserve(pairs.size());
  std::vector<LocalEdge> row_edges;
  row_edges.reserve(pairs.size());
  for (const Edge& p : pairs) {
    const auto src = subgraph.local_id(p.src);
    if (!src) {
      throw LogicError("draw source " + std::to_string(p.src) +
                       " is not in the subgraph");
    }
    bool inserted = false;
    const LocalId dst = subgraph.intern(p.dst, &inserted);
    if (inserted) block.dst_unique_local.push_back(dst);
    block.edges.push_back({*src, dst});

    LocalId row = 0;
    if (contiguous) {
      row = *src - first;
      if (*src < first || row >= block.src_local.size()) {
        throw LogicError("draw source " + std::to_string(p.src) +
                         " is not in the frontier");
      }
    } else {
      const auto it = row_of.find(*src);
      if (it == row_of.end()) {
        throw LogicError("draw source " + std::to_string(p.src) +
                         " is not in the frontier");
      }
      row = it->second;
    }
    row_edges.push_back({row, dst});
  }
  block.raw_draw_count = pairs.size();

  SubgraphCsr csr = build_subgraph_csr(row_edges, block.src_local.size());
  block.csr_offsets = std::move(csr.offsets);
  block.csr_targets = std::move(csr.targets);
  return subgraph.append_hop(std::move(block));
}

std::vector<VertexId> select_seeds(const CsrGraph& graph,
                                   std::uint32_t batch_size, Rng& rng) {
  const std::size_t n = graph.num_vertices();
  if (batch_size > n) {
    throw ConfigError("batch_size " + std::to_string(batch_size) +
                      " exceeds vertex count " + std::to_string(n));
  }
  // Floyd's subset sampling; keeps insertion order for determinism.
  std::vector<VertexId> seeds;
  seeds.reserve(batch_size);
  std::unordered_set<VertexId> chosen;
  chosen.reserve(batch_size * 2);
  for (std::size_t j = n - batch_size; j < n; ++j) {
    auto t = static_cast<VertexId>(rng.uniform_below(j + 1));
    if (!chosen.insert(t).second) {
      t = static_cast<VertexId>(j);
      chosen.insert(t);
    }
    seeds.push_back(t);
  }
  return seeds;
}

SampleResult sample_minibatch(const CsrGraph& graph, const SampleConfig& config,
                              std::span<const VertexId> seeds, Rng& rng,
                              bool record_draws) {
  config.validate();
  if (seeds.size() != config.batch_size) {
    throw ConfigError("expected " + std::to_string(config.batch_size) +
                      " seeds, got " + std::to_string(seeds.size()));
  }
  for (VertexId s : seeds) {
    if (s >= graph.num_vertices()) {
      throw IndexError("seed vertex " + std::to_string(s) + " out of range");
    }
  }

  SampleResult result;
  result.subgraph = SampledSubgraph(seeds);
  IterationMetadata& meta = result.metadata;
  meta.batch_size = config.batch_size;

  std::vector<VertexId> frontier(seeds.begin(), seeds.end());
  for (std::size_t h = 0; h < config.num_hops(); ++h) {
    Rng hop_rng = rng.substream(h + 1);
    std::vector<Edge> pairs = sample_hop(graph, frontier, config.fanouts[h], hop_rng);
    const HopBlock& block = dedup_relabel(frontier, pairs, result.subgraph);

    meta.per_hop_vertex_counts.push_back(result.subgraph.num_vertices());
    meta.per_hop_edge_counts.push_back(block.raw_draw_count);
    meta.total_edges += block.raw_draw_count;

    std::vector<VertexId> next;
    next.reserve(block.dst_unique_local.size());
    const auto l2g = result.subgraph.local_to_global();
    for (LocalId id : block.dst_unique_local) next.push_back(l2g[id]);
    frontier = std::move(next);
    if (record_draws) result.draw_log.push_back(std::move(pairs));
  }
  meta.total_unique_vertices = result.subgraph.num_vertices();
  return result;
}

SampleResult sample_iteration(const CsrGraph& graph, const SampleConfig& config,
                              Rng& rng, bool record_draws) {
  config.validate();
  Rng seed_rng = rng.substream(0);
  const std::vector<VertexId> seeds = select_seeds(graph, config.batch_size, seed_rng);
  return sample_minibatch(graph, config, seeds, rng, record_draws);
}

GatherIndices gather_indices(const SampledSubgraph& subgraph) {
  GatherIndices out;
  const auto l2g = subgraph.local_to_global();
  out.feature_rows.assign(l2g.begin(), l2g.end());
  out.label_rows.assign(l2g.begin(), l2g.begin() + subgraph.num_seeds());
  return out;
}

std::uint64_t prefix_sum_rounds(std::uint64_t n, std::uint64_t block_quota) {
  if (block_quota < 2) throw ConfigError("scan block quota must be at least 2");
  std::uint64_t levels = 1;
  while (n > block_quota) {
    n = (n + block_quota - 1) / block_quota;
    ++levels;
  }
  return 2 * levels - 1;
}

}  // namespace gnnsim
