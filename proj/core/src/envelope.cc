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

#include "gnnsim/envelope.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gnnsim/error.h"

namespace gnnsim {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) return kSaturated;
  return out;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) return kSaturated;
  return out;
}

}  // namespace

std::uint64_t EnvelopeSpec::frontier_bound(std::size_t hop) const {
  if (hop == 0 || hop > num_hops()) {
    throw IndexError("hop " + std::to_string(hop) + " out of range");
  }
  if (hop == 1) return std::min<std::uint64_t>(batch_size, num_vertices);
  return v_max_per_hop[hop - 2] - batch_size;
}

bool OverflowFlags::any() const {
  return std::find(per_hop.begin(), per_hop.end(), true) != per_hop.end();
}

std::vector<double> hitting_probability(const CsrGraph& graph) {
  const EdgeIndex total = total_degree(graph);
  if (total == 0) throw ModelError("hit model needs a graph with edges");
  std::vector<double> pi(graph.num_vertices());
  const double denom = static_cast<double>(total);
  for (std::size_t v = 0; v < pi.size(); ++v) {
    pi[v] = static_cast<double>(graph.degree(static_cast<VertexId>(v))) / denom;
  }
  return pi;
}

std::vector<std::uint64_t> draws_per_hop(const SampleConfig& config,
                                         std::uint64_t num_vertices) {
  config.validate();
  std::vector<std::uint64_t> draws;
  draws.reserve(config.num_hops());
  std::uint64_t worst_frontier = config.batch_size;
  for (std::uint32_t f : config.fanouts) {
    draws.push_back(sat_mul(std::min(worst_frontier, num_vertices), f));
    worst_frontier = sat_mul(worst_frontier, f);
  }
  return draws;
}

HitModel build_hit_model(const CsrGraph& graph, const SampleConfig& config) {
  HitModel model;
  model.pi = hitting_probability(graph);
  model.draws_per_hop = draws_per_hop(config, graph.num_vertices());
  for (std::uint64_t s : model.draws_per_hop) {
    model.total_draws = sat_add(model.total_draws, s);
  }
  return model;
}

double vertex_hit_prob(double pi, std::uint64_t s) {
  if (pi <= 0.0 || s == 0) return 0.0;
  if (pi >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(s) * std::log1p(-pi));
}

namespace {

PbMoments finish(double mu, double sigma2) {
  PbMoments m;
  m.mu = mu;
  m.sigma2 = sigma2;
  if (mu > 0.0) {
    m.cv = std::sqrt(sigma2) / mu;
    m.cv_defined = true;
  } else {
    m.cv = std::numeric_limits<double>::quiet_NaN();
  }
  return m;
}

}  // namespace

PbMoments pb_moments(std::span<const double> p) {
  double mu = 0.0;
  double sigma2 = 0.0;
  for (double x : p) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw DomainError("probability outside [0, 1]: " + std::to_string(x));
    }
    mu += x;
    sigma2 += x * (1.0 - x);
  }
  return finish(mu, sigma2);
}

PbMoments hit_moments(std::span<const double> pi, std::uint64_t s) {
  double mu = 0.0;
  double sigma2 = 0.0;
  for (double x : pi) {
    const double p = vertex_hit_prob(x, s);
    mu += p;
    sigma2 += p * (1.0 - p);
  }
  return finish(mu, sigma2);
}

double normalized_range_bound(const PbMoments& moments, double z) {
  if (!moments.cv_defined) {
    throw DomainError("range bound undefined for a zero-mean distribution");
  }
  return 2.0 * z * moments.cv;
}

std::vector<double> pb_exact_distribution(std::span<const double> p) {
  if (p.size() > kPbExactMaxSize) {
    throw ConfigError("pb_exact_distribution supports at most " +
                      std::to_string(kPbExactMaxSize) + " probabilities");
  }
  std::vector<double> pmf(p.size() + 1, 0.0);
  pmf[0] = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = p[i];
    if (!(x >= 0.0 && x <= 1.0)) {
      throw DomainError("probability outside [0, 1]: " + std::to_string(x));
    }
    for (std::size_t k = i + 1; k > 0; --k) {
      pmf[k] = pmf[k] * (1.0 - x) + pmf[k - 1] * x;
    }
    pmf[0] *= 1.0 - x;
  }
  return pmf;
}

std::size_t pmf_quantile(std::span<const double> pmf, double q) {
  if (pmf.empty()) throw ConfigError("empty pmf");
  double cdf = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    cdf += pmf[k];
    if (cdf >= q) return k;
  }
  return pmf.size() - 1;
}

std::vector<std::uint64_t> maxsg_vertex_caps(const SampleConfig& config,
                                             std::uint64_t num_vertices) {
  config.validate();
  std::vector<std::uint64_t> caps;
  caps.reserve(config.num_hops());
  std::uint64_t product = config.batch_size;
  for (std::uint32_t f : config.fanouts) {
    product = sat_mul(product, f);
    caps.push_back(std::min(sat_add(product, config.batch_size), num_vertices));
  }
  return caps;
}

std::vector<std::uint64_t> maxsg_edge_caps(const SampleConfig& config,
                                           std::uint64_t num_vertices) {
  return draws_per_hop(config, num_vertices);
}

EnvelopeSpec compute_envelope(const CsrGraph& graph, const SampleConfig& config,
                              double confidence, std::uint64_t repetitions,
                              double safety_factor) {
  config.validate();
  if (!(safety_factor >= 1.0) || !std::isfinite(safety_factor)) {
    throw ConfigError("safety_factor must be a finite value >= 1");
  }
  const std::uint64_t n = graph.num_vertices();
  if (config.batch_size > n) {
    throw ConfigError("batch_size exceeds the vertex count");
  }

  EnvelopeSpec env;
  env.confidence = confidence;
  env.repetitions = repetitions;
  env.z = repetition_quantile(confidence, repetitions);
  env.safety_factor = safety_factor;
  env.batch_size = config.batch_size;
  env.fanouts = config.fanouts;
  env.num_vertices = n;

  const HitModel model = build_hit_model(graph, config);
  const std::vector<std::uint64_t> caps = maxsg_vertex_caps(config, n);
  const double batch = config.batch_size;

  std::uint64_t cumulative = 0;
  PbMoments last;
  for (std::size_t h = 0; h < config.num_hops(); ++h) {
    cumulative = sat_add(cumulative, model.draws_per_hop[h]);
    last = hit_moments(model.pi, cumulative);
    const double sigma = std::sqrt(last.sigma2);
    env.mu_per_hop.push_back(last.mu);
    env.sigma_per_hop.push_back(sigma);

    const double raw = std::max(0.0, safety_factor * (last.mu + env.z * sigma));
    const double bound = std::ceil(raw) + batch;
    std::uint64_t v = bound >= static_cast<double>(n)
                          ? n
                          : static_cast<std::uint64_t>(bound);
    v = std::min(v, caps[h]);
    env.v_max_per_hop.push_back(v);
  }
  env.v_max_total = env.v_max_per_hop.back();

  for (std::size_t h = 1; h <= config.num_hops(); ++h) {
    env.e_max_per_hop.push_back(
        sat_mul(std::min(env.frontier_bound(h), n), config.fanouts[h - 1]));
  }

  env.range_bound = last.cv_defined ? normalized_range_bound(last, env.z) : 0.0;
  return env;
}

OverflowFlags check_overflow(const IterationMetadata& metadata,
                             const EnvelopeSpec& envelope) {
  if (metadata.num_hops() != envelope.num_hops() ||
      metadata.per_hop_edge_counts.size() != envelope.e_max_per_hop.size()) {
    throw ConfigError("metadata has " + std::to_string(metadata.num_hops()) +
                      " hops but the envelope has " +
                      std::to_string(envelope.num_hops()));
  }
  OverflowFlags flags;
  flags.per_hop.resize(envelope.num_hops());
  for (std::size_t h = 0; h < envelope.num_hops(); ++h) {
    flags.per_hop[h] =
        metadata.per_hop_vertex_counts[h] > envelope.v_max_per_hop[h] ||
        metadata.per_hop_edge_counts[h] > envelope.e_max_per_hop[h];
  }
  return flags;
}

}  // namespace gnnsim
