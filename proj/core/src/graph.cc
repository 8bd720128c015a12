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

#include "gnnsim/graph.h"

#include <algorithm>
#include <string>

#include "gnnsim/error.h"

namespace gnnsim {

CsrGraph::CsrGraph() : offsets_(1, 0) {}

CsrGraph::CsrGraph(std::vector<EdgeIndex> offsets,
                   std::vector<VertexId> targets)
    : offsets_(std::move(offsets)), targets_(std::move(targets)) {
  if (offsets_.empty()) throw ConfigError("CSR offsets must not be empty");
  if (offsets_.front() != 0) throw ConfigError("CSR offsets[0] must be 0");
  if (offsets_.back() != targets_.size()) {
    throw ConfigError("CSR offsets[n] must equal the number of targets");
  }
  if (!std::is_sorted(offsets_.begin(), offsets_.end())) {
    throw ConfigError("CSR offsets must be nondecreasing");
  }
  const std::size_t n = offsets_.size() - 1;
  for (VertexId t : targets_) {
    if (t >= n) {
      throw ConfigError("CSR target " + std::to_string(t) +
                        " out of range for " + std::to_string(n) +
                        " vertices");
    }
  }
}

CsrGraph CsrGraph::from_edges(std::size_t num_vertices,
                              std::span<const Edge> edges) {
  std::vector<EdgeIndex> offsets(num_vertices + 1, 0);
  for (const Edge& e : edges) {
    if (e.src >= num_vertices || e.dst >= num_vertices) {
      throw RangeError("edge (" + std::to_string(e.src) + ", " +
                       std::to_string(e.dst) + ") out of range for " +
                       std::to_string(num_vertices) + " vertices");
    }
    ++offsets[e.src + 1];
  }
  for (std::size_t v = 0; v < num_vertices; ++v) offsets[v + 1] += offsets[v];

  std::vector<VertexId> targets(edges.size());
  std::vector<EdgeIndex> cursor(offsets.begin(), offsets.end() - 1);
  for (const Edge& e : edges) targets[cursor[e.src]++] = e.dst;

  CsrGraph graph;
  graph.offsets_ = std::move(offsets);
  graph.targets_ = std::move(targets);
  return graph;
}

EdgeIndex total_degree(const CsrGraph& graph) {
  EdgeIndex sum = 0;
  for (std::size_t v = 0; v < graph.num_vertices(); ++v) {
    sum += graph.degree(static_cast<VertexId>(v));
  }
  return sum;
}

}  // namespace gnnsim
