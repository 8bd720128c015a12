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

#include "gnnsim/provisioning.h"

#include <cmath>
#include <string>

#include "gnnsim/error.h"

namespace gnnsim {
namespace {

MemoryPlan make_plan(PlanStrategy strategy, std::uint32_t feature_dim,
                     std::vector<std::uint64_t> vertex_caps,
                     std::vector<std::uint64_t> edge_caps,
                     std::uint64_t total_vertices, std::uint32_t batch_size,
                     const ElementSizes& sizes) {
  MemoryPlan plan;
  plan.strategy = strategy;
  plan.feature_dim = feature_dim;
  for (std::size_t h = 0; h < vertex_caps.size(); ++h) {
    plan.buffers.push_back({hop_vertices_key(h + 1), vertex_caps[h], sizes.id_bytes});
    plan.buffers.push_back({hop_edges_key(h + 1), edge_caps[h], sizes.id_bytes});
  }
  plan.buffers.push_back({"mapping", total_vertices, sizes.id_bytes});
  plan.buffers.push_back(
      {"features", total_vertices * feature_dim, sizes.feature_bytes});
  plan.buffers.push_back({"labels", batch_size, sizes.id_bytes});
  for (const BufferSpec& b : plan.buffers) plan.total_bytes += b.bytes();
  plan.vertex_caps = std::move(vertex_caps);
  plan.edge_caps = std::move(edge_caps);
  return plan;
}

}  // namespace

std::string to_string(PlanStrategy strategy) {
  switch (strategy) {
    case PlanStrategy::kMaxSG: return "maxsg";
    case PlanStrategy::kExact: return "exact";
    case PlanStrategy::kEnvelope: return "envelope";
  }
  return "unknown";
}

const BufferSpec& MemoryPlan::buffer(std::string_view name) const {
  for (const BufferSpec& b : buffers) {
    if (b.name == name) return b;
  }
  throw ConfigError("plan has no buffer named '" + std::string(name) + "'");
}

std::string hop_vertices_key(std::size_t hop) {
  return "hop" + std::to_string(hop) + ".vertices";
}

std::string hop_edges_key(std::size_t hop) {
  return "hop" + std::to_string(hop) + ".edges";
}

std::vector<std::string> metadata_keys(std::size_t num_hops) {
  std::vector<std::string> keys;
  for (std::size_t h = 1; h <= num_hops; ++h) {
    keys.push_back(hop_vertices_key(h));
    keys.push_back(hop_edges_key(h));
  }
  return keys;
}

MemoryPlan maxsg_plan(const SampleConfig& config, std::uint32_t feature_dim,
                      std::uint64_t num_vertices, const ElementSizes& sizes) {
  auto vertex_caps = maxsg_vertex_caps(config, num_vertices);
  auto edge_caps = maxsg_edge_caps(config, num_vertices);
  const std::uint64_t total = vertex_caps.back();
  return make_plan(PlanStrategy::kMaxSG, feature_dim, std::move(vertex_caps),
                   std::move(edge_caps), total, config.batch_size, sizes);
}

MemoryPlan exact_plan(const IterationMetadata& metadata,
                      std::uint32_t feature_dim, const ElementSizes& sizes) {
  return make_plan(PlanStrategy::kExact, feature_dim,
                   metadata.per_hop_vertex_counts, metadata.per_hop_edge_counts,
                   metadata.total_unique_vertices, metadata.batch_size, sizes);
}

MemoryPlan envelope_plan(const EnvelopeSpec& envelope, std::uint32_t feature_dim,
                         std::uint32_t batch_size, const ElementSizes& sizes) {
  return make_plan(PlanStrategy::kEnvelope, feature_dim, envelope.v_max_per_hop,
                   envelope.e_max_per_hop, envelope.v_max_total, batch_size,
                   sizes);
}

PlanComparison compare_plans(std::span<const MemoryPlan> plans) {
  if (plans.size() < 2) throw ConfigError("compare_plans needs at least two plans");
  PlanComparison out;
  std::size_t reference = 0;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    if (plans[i].strategy == PlanStrategy::kMaxSG) {
      reference = i;
      break;
    }
  }
  for (const MemoryPlan& p : plans) {
    out.strategies.push_back(p.strategy);
    out.total_bytes.push_back(p.total_bytes);
  }
  out.ratio.assign(plans.size(), std::vector<double>(plans.size(), 1.0));
  for (std::size_t i = 0; i < plans.size(); ++i) {
    for (std::size_t j = 0; j < plans.size(); ++j) {
      out.ratio[i][j] = static_cast<double>(out.total_bytes[i]) /
                        static_cast<double>(out.total_bytes[j]);
    }
  }
  for (std::size_t i = 0; i < plans.size(); ++i) {
    out.log2_vs_maxsg.push_back(std::log2(out.ratio[reference][i]));
  }
  return out;
}

BufferArena::BufferArena(const MemoryPlan& plan,
                         std::span<const std::string> metadata_keys)
    : feature_dim_(plan.feature_dim) {
  for (const BufferSpec& b : plan.buffers) {
    const auto [it, fresh] = buffers_.try_emplace(
        b.name, Buffer{next_id_, b.element_count, b.bytes_per_element});
    if (!fresh) throw ConfigError("duplicate buffer '" + b.name + "'");
    ++next_id_;
  }
  std::uint64_t slot = 0;
  for (const std::string& key : metadata_keys) {
    if (!slots_.try_emplace(key, Slot{slot, 0}).second) {
      throw ConfigError("duplicate metadata key '" + key + "'");
    }
    ++slot;
  }
}

const BufferArena::Buffer& BufferArena::buffer(std::string_view name) const {
  const auto it = buffers_.find(name);
  if (it == buffers_.end()) {
    throw ConfigError("arena has no buffer named '" + std::string(name) + "'");
  }
  return it->second;
}

std::map<std::string, std::uint64_t> BufferArena::buffer_ids() const {
  std::map<std::string, std::uint64_t> ids;
  for (const auto& [name, b] : buffers_) ids.emplace(name, b.id);
  return ids;
}

void BufferArena::request(std::string_view name, std::uint64_t count) const {
  const Buffer& b = buffer(name);
  if (count > b.capacity) {
    throw CapacityError("buffer '" + std::string(name) + "' holds " +
                        std::to_string(b.capacity) + " elements, requested " +
                        std::to_string(count));
  }
}

std::uint64_t BufferArena::metadata_slot(std::string_view key) const {
  const auto it = slots_.find(key);
  if (it == slots_.end()) {
    throw ConfigError("no metadata slot for '" + std::string(key) + "'");
  }
  return it->second.id;
}

std::uint64_t BufferArena::store_metadata(std::string_view key,
                                          std::uint64_t value) {
  const auto it = slots_.find(key);
  if (it == slots_.end()) {
    throw ConfigError("no metadata slot for '" + std::string(key) + "'");
  }
  it->second.value = value;
  return it->second.id;
}

std::uint64_t BufferArena::load_metadata(std::string_view key) const {
  const auto it = slots_.find(key);
  if (it == slots_.end()) {
    throw ConfigError("no metadata slot for '" + std::string(key) + "'");
  }
  return it->second.value;
}

void BufferArena::reallocate(std::string_view name, std::uint64_t capacity) {
  const auto it = buffers_.find(name);
  if (it == buffers_.end()) {
    throw ConfigError("arena has no buffer named '" + std::string(name) + "'");
  }
  it->second.id = next_id_++;
  it->second.capacity = capacity;
  ++epoch_;
}

void load_iteration(BufferArena& arena, const IterationMetadata& metadata) {
  const MemoryPlan need = exact_plan(metadata, arena.feature_dim());
  for (const BufferSpec& b : need.buffers) arena.request(b.name, b.element_count);
  for (std::size_t h = 0; h < metadata.num_hops(); ++h) {
    arena.store_metadata(hop_vertices_key(h + 1), metadata.per_hop_vertex_counts[h]);
    arena.store_metadata(hop_edges_key(h + 1), metadata.per_hop_edge_counts[h]);
  }
}

void warm_up(BufferArena& arena, const EnvelopeSpec& envelope,
             const IterationMetadata& safe) {
  if (check_overflow(safe, envelope).any()) {
    throw ConfigError(
        "warm-up iteration exceeds the envelope; increase safety_factor");
  }
  load_iteration(arena, safe);
  arena.mark_warmed_up();
}

IterationOutcome run_iteration_with_fallback(BufferArena& arena,
                                             const EnvelopeSpec& envelope,
                                             const IterationMetadata& metadata,
                                             const IterationMetadata& safe) {
  if (check_overflow(safe, envelope).any()) {
    throw ConfigError("cached safe iteration does not fit the envelope");
  }
  if (!check_overflow(metadata, envelope).any()) {
    load_iteration(arena, metadata);
    return IterationOutcome::kNormal;
  }
  // Re-running the safe graph is the same computation on a known batch, so
  // training semantics are preserved; only the overflowing batch is skipped.
  load_iteration(arena, safe);
  arena.record_fallback();
  return IterationOutcome::kFallback;
}

}  // namespace gnnsim
