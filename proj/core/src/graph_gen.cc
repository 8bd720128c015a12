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

#include <cmath>
#include <string>
#include <vector>

#include "gnnsim/error.h"
#include "gnnsim/graph.h"
#include "gnnsim/rng.h"

namespace gnnsim {
namespace {

// Walker/Vose alias table for O(1) draws from a discrete distribution.
class AliasTable {
 public:
  explicit AliasTable(const std::vector<double>& weights)
      : prob_(weights.size()), alias_(weights.size()) {
    const std::size_t n = weights.size();
    double total = 0.0;
    for (double w : weights) total += w;
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = weights[i] * static_cast<double>(n) / total;
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const std::uint32_t s = small.back();
      small.pop_back();
      const std::uint32_t l = large.back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (std::uint32_t i : large) prob_[i] = 1.0;
    for (std::uint32_t i : small) prob_[i] = 1.0;
  }

  std::uint32_t draw(Rng& rng) const {
    const auto column = static_cast<std::uint32_t>(rng.uniform_below(prob_.size()));
    return rng.uniform01() < prob_[column] ? column : alias_[column];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

std::vector<double> power_law_weights(std::size_t n, double exponent,
                                      std::uint64_t edges) {
  const double a = 1.0 / (exponent - 1.0);
  const double target_share =
      std::sqrt(static_cast<double>(edges)) / static_cast<double>(edges);
  const auto head_share = [&](double offset) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += std::pow(static_cast<double>(i) + offset, -a);
    }
    return std::pow(offset, -a) / sum;
  };

  // The head share decreases as the offset grows; bisect in log space.
  double offset = 1.0;
  if (head_share(1.0) > target_share) {
    double lo = 0.0;
    double hi = std::log(static_cast<double>(n) + 1.0);
    for (int iter = 0; iter < 48; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (head_share(std::exp(mid)) > target_share ? lo : hi) = mid;
    }
    offset = std::exp(hi);
  }

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::pow(static_cast<double>(i) + offset, -a);
  }
  return w;
}

}  // namespace

std::string to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::kUniformRandom: return "uniform-random";
    case GraphKind::kPowerLaw: return "power-law";
    case GraphKind::kStar: return "star";
    case GraphKind::kRing: return "ring";
    case GraphKind::kComplete: return "complete";
  }
  return "unknown";
}

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "uniform-random" || name == "uniform") return GraphKind::kUniformRandom;
  if (name == "power-law") return GraphKind::kPowerLaw;
  if (name == "star") return GraphKind::kStar;
  if (name == "ring") return GraphKind::kRing;
  if (name == "complete") return GraphKind::kComplete;
  throw ConfigError("unknown graph kind '" + std::string(name) + "'");
}

void GraphGenSpec::validate() const {
  if (num_vertices == 0) throw ConfigError("graph needs at least one vertex");
  if (num_vertices > std::uint64_t{0xFFFFFFFF}) {
    throw ConfigError("vertex count exceeds 32-bit ids");
  }
  if (kind == GraphKind::kUniformRandom || kind == GraphKind::kPowerLaw) {
    const auto n = static_cast<std::uint64_t>(num_vertices);
    if (target_edges == 0) throw ConfigError("target_edges must be positive");
    if (target_edges / n > n || (target_edges / n == n && target_edges % n)) {
      throw ConfigError("target_edges " + std::to_string(target_edges) +
                        " exceeds n^2 for n = " + std::to_string(n));
    }
  }
  if (kind == GraphKind::kPowerLaw && !(exponent > 1.0)) {
    throw ConfigError("power-law exponent must exceed 1");
  }
}

CsrGraph generate(const GraphGenSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::size_t n = spec.num_vertices;
  std::vector<Edge> edges;

  switch (spec.kind) {
    case GraphKind::kStar:
      for (std::size_t v = 1; v < n; ++v) {
        edges.push_back({0, static_cast<VertexId>(v)});
      }
      break;
    case GraphKind::kRing:
      for (std::size_t v = 0; v < n; ++v) {
        edges.push_back(
            {static_cast<VertexId>(v), static_cast<VertexId>((v + 1) % n)});
      }
      break;
    case GraphKind::kComplete:
      edges.reserve(n * (n - 1));
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
          if (u != v) {
            edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
          }
        }
      }
      break;
    case GraphKind::kUniformRandom: {
      Rng rng(seed);
      edges.resize(spec.target_edges);
      for (Edge& e : edges) {
        e.src = static_cast<VertexId>(rng.uniform_below(n));
        e.dst = static_cast<VertexId>(rng.uniform_below(n));
      }
      break;
    }
    case GraphKind::kPowerLaw: {
      const AliasTable table(power_law_weights(n, spec.exponent, spec.target_edges));
      Rng src_rng = Rng(seed).substream(1);
      Rng dst_rng = Rng(seed).substream(2);
      edges.resize(spec.target_edges);
      for (Edge& e : edges) {
        e.src = table.draw(src_rng);
        e.dst = table.draw(dst_rng);
      }
      break;
    }
  }
  return CsrGraph::from_edges(n, edges);
}

}  // namespace gnnsim
