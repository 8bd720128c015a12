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

#ifndef GNNSIM_PROVISIONING_H_
#define GNNSIM_PROVISIONING_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gnnsim/envelope.h"
#include "gnnsim/sampler.h"

namespace gnnsim {

enum class PlanStrategy { kMaxSG, kExact, kEnvelope };

std::string to_string(PlanStrategy strategy);

struct ElementSizes {
  std::uint32_t id_bytes = 4;
  std::uint32_t feature_bytes = 4;
};

struct BufferSpec {
  std::string name;
  std::uint64_t element_count = 0;
  std::uint32_t bytes_per_element = 0;

  std::uint64_t bytes() const { return element_count * bytes_per_element; }
  friend bool operator==(const BufferSpec&, const BufferSpec&) = default;
};

// Buffer inventory, in order: hop{h}.vertices and hop{h}.edges for each hop,
// then mapping, features and labels. Vertex counts are cumulative and include
// the seed batch.
struct MemoryPlan {
  PlanStrategy strategy = PlanStrategy::kExact;
  std::uint32_t feature_dim = 0;
  std::vector<std::uint64_t> vertex_caps;
  std::vector<std::uint64_t> edge_caps;
  std::vector<BufferSpec> buffers;
  std::uint64_t total_bytes = 0;

  // Throws ConfigError for an unknown name.
  const BufferSpec& buffer(std::string_view name) const;
  friend bool operator==(const MemoryPlan&, const MemoryPlan&) = default;
};

std::string hop_vertices_key(std::size_t hop);
std::string hop_edges_key(std::size_t hop);
// hop{h}.vertices and hop{h}.edges for h = 1..num_hops.
std::vector<std::string> metadata_keys(std::size_t num_hops);

MemoryPlan maxsg_plan(const SampleConfig& config, std::uint32_t feature_dim,
                      std::uint64_t num_vertices, const ElementSizes& sizes = {});
MemoryPlan exact_plan(const IterationMetadata& metadata,
                      std::uint32_t feature_dim, const ElementSizes& sizes = {});
MemoryPlan envelope_plan(const EnvelopeSpec& envelope, std::uint32_t feature_dim,
                         std::uint32_t batch_size, const ElementSizes& sizes = {});

struct PlanComparison {
  std::vector<PlanStrategy> strategies;
  std::vector<std::uint64_t> total_bytes;
  // ratio[i][j] = total_bytes[i] / total_bytes[j].
  std::vector<std::vector<double>> ratio;
  // log2(reference / plan) where the reference is the MaxSG plan if present,
  // otherwise the first plan.
  std::vector<double> log2_vs_maxsg;
};

// Throws ConfigError for fewer than two plans.
PlanComparison compare_plans(std::span<const MemoryPlan> plans);

// Fixed-identity buffer pool. Buffer ids and metadata slots are assigned at
// construction; only reallocate() changes an id, and it bumps the epoch.
class BufferArena {
 public:
  struct Buffer {
    std::uint64_t id = 0;
    std::uint64_t capacity = 0;
    std::uint32_t bytes_per_element = 0;
  };

  BufferArena(const MemoryPlan& plan, std::span<const std::string> metadata_keys);

  std::uint32_t feature_dim() const { return feature_dim_; }
  // Throws ConfigError for an unknown name.
  const Buffer& buffer(std::string_view name) const;
  std::map<std::string, std::uint64_t> buffer_ids() const;

  // Throws CapacityError if count exceeds the buffer's capacity.
  void request(std::string_view name, std::uint64_t count) const;

  // Throws ConfigError for an unknown key.
  std::uint64_t metadata_slot(std::string_view key) const;
  // Returns the slot the value was written to.
  std::uint64_t store_metadata(std::string_view key, std::uint64_t value);
  std::uint64_t load_metadata(std::string_view key) const;

  std::uint64_t allocation_epoch() const { return epoch_; }
  // Replaces a buffer with a fresh allocation. Any captured replay graph
  // that references it becomes invalid.
  void reallocate(std::string_view name, std::uint64_t capacity);

  bool warmed_up() const { return warmed_up_; }
  void mark_warmed_up() { warmed_up_ = true; }
  std::uint64_t fallback_count() const { return fallbacks_; }
  void record_fallback() { ++fallbacks_; }

 private:
  struct Slot {
    std::uint64_t id = 0;
    std::uint64_t value = 0;
  };

  std::uint32_t feature_dim_ = 0;
  std::uint64_t next_id_ = 1;
  std::uint64_t epoch_ = 0;
  bool warmed_up_ = false;
  std::uint64_t fallbacks_ = 0;
  std::map<std::string, Buffer, std::less<>> buffers_;
  std::map<std::string, Slot, std::less<>> slots_;
};

// Writes the iteration's metadata into the arena slots and checks every
// buffer request against capacity.
void load_iteration(BufferArena& arena, const IterationMetadata& metadata);

// Runs the warm-up iteration. Throws ConfigError if it does not fit the
// envelope (a larger safety factor is needed).
void warm_up(BufferArena& arena, const EnvelopeSpec& envelope,
             const IterationMetadata& safe);

enum class IterationOutcome { kNormal, kFallback };

// Normal when the iteration fits the envelope; otherwise the cached safe
// iteration is loaded in its place and the fallback counter advances.
// Throws ConfigError if the safe iteration itself overflows.
IterationOutcome run_iteration_with_fallback(BufferArena& arena,
                                             const EnvelopeSpec& envelope,
                                             const IterationMetadata& metadata,
                                             const IterationMetadata& safe);

}  // namespace gnnsim

#endif  // GNNSIM_PROVISIONING_H_
