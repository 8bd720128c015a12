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

#ifndef GNNSIM_ENVELOPE_H_
#define GNNSIM_ENVELOPE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gnnsim/graph.h"
#include "gnnsim/sampler.h"

namespace gnnsim {

// Degree-proportional hit model for one sampling configuration.
struct HitModel {
  std::vector<double> pi;
  std::vector<std::uint64_t> draws_per_hop;
  std::uint64_t total_draws = 0;
};

struct PbMoments {
  double mu = 0.0;
  double sigma2 = 0.0;
  // NaN when mu == 0; check cv_defined.
  double cv = 0.0;
  bool cv_defined = false;
};

// Statically computed per-hop bounds. Vertex bounds are cumulative unique
// counts including the seed batch.
struct EnvelopeSpec {
  double confidence = 0.999;
  std::uint64_t repetitions = 1;
  double z = 0.0;
  double safety_factor = 1.0;
  std::uint32_t batch_size = 0;
  std::vector<std::uint32_t> fanouts;
  std::uint64_t num_vertices = 0;
  std::vector<double> mu_per_hop;
  std::vector<double> sigma_per_hop;
  std::vector<std::uint64_t> v_max_per_hop;
  std::vector<std::uint64_t> e_max_per_hop;
  std::uint64_t v_max_total = 0;
  double range_bound = 0.0;

  std::size_t num_hops() const { return v_max_per_hop.size(); }
  // Upper bound on hop h's frontier (1-based): B for hop 1, then the
  // non-seed part of the previous hop's vertex bound.
  std::uint64_t frontier_bound(std::size_t hop) const;

  friend bool operator==(const EnvelopeSpec&, const EnvelopeSpec&) = default;
};

// pi_v = deg(v) / total degree. Throws ModelError on an edgeless graph.
std::vector<double> hitting_probability(const CsrGraph& graph);

// Worst-case draws per hop: S_h = min(B * prod_{i<h} F_i, n) * F_h.
std::vector<std::uint64_t> draws_per_hop(const SampleConfig& config,
                                         std::uint64_t num_vertices);
HitModel build_hit_model(const CsrGraph& graph, const SampleConfig& config);

// 1 - (1 - pi)^s, evaluated as -expm1(s * log1p(-pi)).
double vertex_hit_prob(double pi, std::uint64_t s);

// Throws DomainError if any p is outside [0, 1].
PbMoments pb_moments(std::span<const double> p);
// Moments of the vertex-hit indicators after s draws, without materializing p.
PbMoments hit_moments(std::span<const double> pi, std::uint64_t s);

// Standard normal CDF.
double normal_cdf(double x);
// Inverse standard normal CDF, |error| <= 1e-8 on [1e-12, 1 - 1e-12].
// Throws DomainError unless 0 < q < 1.
double normal_quantile(double q);
// Phi^-1(p^(1/m)). The upper tail 1 - p^(1/m) is formed with expm1 so large
// m keeps full precision.
double repetition_quantile(double p, std::uint64_t m);

// Throws DomainError when mu == 0.
double normalized_range_bound(const PbMoments& moments, double z);

// Maximum vector length accepted by pb_exact_distribution.
inline constexpr std::size_t kPbExactMaxSize = 10000;

// Exact Poisson-binomial pmf over 0..p.size() by DP convolution. Throws
// ConfigError above kPbExactMaxSize and DomainError for p outside [0, 1].
std::vector<double> pb_exact_distribution(std::span<const double> p);
// Smallest k with CDF(k) >= q.
std::size_t pmf_quantile(std::span<const double> pmf, double q);

// MaxSG caps: cumulative vertices min(B * prod_{i<=h} F_i + B, n), edges
// min(B * prod_{i<h} F_i, n) * F_h. Products saturate instead of wrapping.
std::vector<std::uint64_t> maxsg_vertex_caps(const SampleConfig& config,
                                             std::uint64_t num_vertices);
std::vector<std::uint64_t> maxsg_edge_caps(const SampleConfig& config,
                                           std::uint64_t num_vertices);

// Builds the envelope. Each hop's vertex bound is
//   min(ceil(sf * (mu_h + z * sigma_h)) + B, n, MaxSG cap_h)
// with mu_h, sigma_h taken at the cumulative draws through hop h.
// Throws ModelError on an edgeless graph, ConfigError on bad parameters.
EnvelopeSpec compute_envelope(const CsrGraph& graph, const SampleConfig& config,
                              double confidence, std::uint64_t repetitions,
                              double safety_factor = 1.0);

struct OverflowFlags {
  std::vector<bool> per_hop;
  bool any() const;
};

// Flag h is set iff the cumulative unique count after hop h exceeds
// v_max_per_hop[h] or hop h's edge count exceeds e_max_per_hop[h]. Bounds are
// inclusive. Throws ConfigError on a hop-count mismatch.
OverflowFlags check_overflow(const IterationMetadata& metadata,
                             const EnvelopeSpec& envelope);

std::string envelope_to_json(const EnvelopeSpec& envelope);
// Throws ParseError/ConfigError on malformed or incomplete input.
EnvelopeSpec envelope_from_json(const std::string& text);

}  // namespace gnnsim

#endif  // GNNSIM_ENVELOPE_H_
