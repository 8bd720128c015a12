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

#ifndef GNNSIM_GRAPH_H_
#define GNNSIM_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gnnsim {

using VertexId = std::uint32_t;
using EdgeIndex = std::uint64_t;

struct Edge {
  VertexId src = 0;
  VertexId dst = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Directed graph in compressed sparse row form. Immutable after
// construction; safe to share between threads.
//
// Invariants: offsets().size() == num_vertices() + 1, offsets().front() == 0,
// offsets().back() == num_edges(), offsets nondecreasing, every target is a
// valid vertex id.
class CsrGraph {
 public:
  // Empty graph with zero vertices.
  CsrGraph();

  // Validates the CSR invariants; throws ConfigError if any is violated.
  CsrGraph(std::vector<EdgeIndex> offsets, std::vector<VertexId> targets);

  // Groups `edges` by source with a stable counting sort, so each vertex's
  // targets keep their input order. Throws RangeError for ids >= num_vertices.
  static CsrGraph from_edges(std::size_t num_vertices,
                             std::span<const Edge> edges);

  std::size_t num_vertices() const { return offsets_.size() - 1; }
  EdgeIndex num_edges() const { return targets_.size(); }

  std::span<const EdgeIndex> offsets() const { return offsets_; }
  std::span<const VertexId> targets() const { return targets_; }

  EdgeIndex degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
  std::span<const VertexId> neighbors(VertexId v) const {
    return std::span<const VertexId>(targets_).subspan(offsets_[v],
                                                       degree(v));
  }

  friend bool operator==(const CsrGraph&, const CsrGraph&) = default;

 private:
  std::vector<EdgeIndex> offsets_;
  std::vector<VertexId> targets_;
};

// Sum of out-degrees; equals num_edges(). The denominator of the
// degree-proportional hit probability.
EdgeIndex total_degree(const CsrGraph& graph);

// ---------------------------------------------------------------------------
// Edge-list text format
//
//   # comment lines start with '#'
//   n=<count>          optional header, declares the vertex count
//   <src> <dst>        one directed edge per line
//
// Without a header the vertex count is max id + 1.

struct EdgeListOptions {
  // Vertex count to use when the input has no "n=" header.
  std::optional<std::size_t> num_vertices;
  // Store both directions of every listed edge (undirected datasets).
  bool symmetrize = false;
  // Remap the ids that occur in the input onto 0..k-1 in ascending id order.
  // Declared vertex counts are ignored when compacting.
  bool compact_ids = false;
};

// Throws ParseError (with 1-based line number) on malformed lines and
// RangeError when an id does not fit VertexId or exceeds the declared count.
CsrGraph load_edge_list(std::istream& in, const EdgeListOptions& options = {});
CsrGraph load_edge_list_file(const std::filesystem::path& path,
                             const EdgeListOptions& options = {});

// Writes an "n=" header followed by every edge in CSR order.
void write_edge_list(std::ostream& out, const CsrGraph& graph);

// ---------------------------------------------------------------------------
// Binary CSR format: magic "CSR1", u64 num_vertices, u64 num_edges,
// (num_vertices + 1) u64 offsets, num_edges u32 targets; all little-endian.

void write_binary_csr(std::ostream& out, const CsrGraph& graph);
CsrGraph read_binary_csr(std::istream& in);

// ---------------------------------------------------------------------------
// Synthetic graphs

enum class GraphKind { kUniformRandom, kPowerLaw, kStar, kRing, kComplete };

std::string to_string(GraphKind kind);
GraphKind parse_graph_kind(std::string_view name);

struct GraphGenSpec {
  GraphKind kind = GraphKind::kPowerLaw;
  std::size_t num_vertices = 0;
  // Exact number of directed edges for uniform-random and power-law; ignored
  // by the structured kinds.
  std::uint64_t target_edges = 0;
  // Degree exponent for power-law; must exceed 1.
  double exponent = 2.1;

  void validate() const;
};

// Pure function of (spec, seed).
//
//   uniform-random  target_edges edges, both endpoints uniform
//   power-law       Chung-Lu expected degrees w_i ~ (i + i0)^(-1/(exponent-1)),
//                   i0 chosen so the largest expected degree is
//                   sqrt(target_edges); both endpoints drawn proportionally
//                   to w, so expected in- and out-degree agree
//   star            vertex 0 -> every other vertex
//   ring            v -> (v + 1) mod n
//   complete        every ordered pair (u, v), u != v
CsrGraph generate(const GraphGenSpec& spec, std::uint64_t seed);

}  // namespace gnnsim

#endif  // GNNSIM_GRAPH_H_
