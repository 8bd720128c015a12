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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "gnnsim/envelope.h"
#include "gnnsim/error.h"
#include "test_support.h"

namespace gnnsim {
namespace {

TEST(HittingProbability, Examples) {
  const auto c3 = hitting_probability(generate({GraphKind::kComplete, 3, 0, 2.1}, 0));
  for (double p : c3) EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);

  const auto star = hitting_probability(generate({GraphKind::kStar, 5, 0, 2.1}, 0));
  EXPECT_DOUBLE_EQ(star[0], 1.0);
  for (int v = 1; v < 5; ++v) EXPECT_EQ(star[v], 0.0);

  const CsrGraph g = CsrGraph::from_edges(
      2, std::vector<Edge>{{0, 1}, {1, 0}, {1, 1}, {1, 0}});
  const auto p = hitting_probability(g);
  EXPECT_DOUBLE_EQ(p[0], 0.25);
  EXPECT_DOUBLE_EQ(p[1], 0.75);
}

TEST(HittingProbability, SumsToOneAndRejectsEdgeless) {
  const auto pi = hitting_probability(generate({GraphKind::kPowerLaw, 20000, 200000, 2.1}, 3));
  EXPECT_NEAR(std::accumulate(pi.begin(), pi.end(), 0.0), 1.0, 1e-9);
  EXPECT_THROW(hitting_probability(CsrGraph::from_edges(3, {})), ModelError);
}

TEST(DrawsPerHop, Examples) {
  EXPECT_EQ(draws_per_hop({2, {3, 2}, 0}, 1'000'000), (std::vector<std::uint64_t>{6, 12}));
  EXPECT_EQ(draws_per_hop({1, {7}, 0}, 1'000'000), (std::vector<std::uint64_t>{7}));
  // Clamp: hop 2's frontier min(1000, 500) = 500.
  EXPECT_EQ(draws_per_hop({100, {10, 10}, 0}, 500), (std::vector<std::uint64_t>{1000, 5000}));
  const CsrGraph g = generate({GraphKind::kComplete, 600, 0, 2.1}, 0);
  // Hop 2 frontier is min(1000, 600).
  EXPECT_EQ(build_hit_model(g, {100, {10, 10}, 0}).total_draws, 7000u);
}

TEST(VertexHitProb, Examples) {
  EXPECT_DOUBLE_EQ(vertex_hit_prob(0.5, 2), 0.75);
  EXPECT_EQ(vertex_hit_prob(0.0, 12345), 0.0);
  EXPECT_EQ(vertex_hit_prob(0.3, 0), 0.0);
  EXPECT_EQ(vertex_hit_prob(1.0, 3), 1.0);
  // 1 - (1 - 1e-6)^1e6, evaluated in 50-digit arithmetic.
  EXPECT_NEAR(vertex_hit_prob(1e-6, 1'000'000), 0.63212074276835490571,
              1e-12 * 0.6321207);
}

TEST(VertexHitProb, RelativeErrorAgainstExtendedPrecision) {
  Rng rng(99);
  for (int i = 0; i < 5000; ++i) {
    // pi * S spans [1e-12, 50].
    const double log_lambda = -12.0 + rng.uniform01() * (12.0 + std::log10(50.0));
    const std::uint64_t s = testing::between(rng, 1, 10'000'000);
    const double pi = std::pow(10.0, log_lambda) / static_cast<double>(s);
    if (pi >= 1.0) continue;
    const long double exact =
        -std::expm1l(static_cast<long double>(s) * std::log1pl(-static_cast<long double>(pi)));
    const double got = vertex_hit_prob(pi, s);
    EXPECT_LE(std::fabs(static_cast<long double>(got) - exact) / exact, 1e-12L)
        << "pi=" << pi << " s=" << s;
  }
}

TEST(PbMoments, Examples) {
  const std::vector<double> half{0.5, 0.5, 0.5};
  const PbMoments m = pb_moments(half);
  EXPECT_DOUBLE_EQ(m.mu, 1.5);
  EXPECT_DOUBLE_EQ(m.sigma2, 0.75);
  EXPECT_NEAR(m.cv, 0.5773502691896258, 1e-12);

  const std::vector<double> ones{1.0, 1.0};
  const PbMoments d = pb_moments(ones);
  EXPECT_EQ(d.mu, 2.0);
  EXPECT_EQ(d.sigma2, 0.0);
  EXPECT_EQ(d.cv, 0.0);

  const std::vector<double> small(5000, 0.002);
  const PbMoments s = pb_moments(small);
  EXPECT_NEAR(s.cv * std::sqrt(s.mu), 1.0, 0.01);
}

TEST(PbMoments, ZeroMeanAndDomain) {
  const std::vector<double> zeros{0.0, 0.0};
  const PbMoments m = pb_moments(zeros);
  EXPECT_FALSE(m.cv_defined);
  EXPECT_TRUE(std::isnan(m.cv));
  EXPECT_THROW(normalized_range_bound(m, 3.0), DomainError);
  const std::vector<double> bad{1.5};
  EXPECT_THROW(pb_moments(bad), DomainError);
}

TEST(NormalizedRangeBound, Examples) {
  const std::vector<double> half{0.5, 0.5};
  EXPECT_EQ(normalized_range_bound(pb_moments(half), 0.0), 0.0);
  const std::vector<double> det{1.0, 0.0, 1.0};
  EXPECT_EQ(normalized_range_bound(pb_moments(det), 4.0), 0.0);
  const std::vector<double> sparse(1'000'000, 0.01);  // mu = 1e4
  EXPECT_NEAR(normalized_range_bound(pb_moments(sparse), 4.0), 2.0 * 4.0 * std::sqrt(0.99) / 100.0, 1e-9);
}

TEST(PbExact, Examples) {
  const std::vector<double> a{0.5};
  EXPECT_EQ(pb_exact_distribution(a), (std::vector<double>{0.5, 0.5}));
  const std::vector<double> b{0.5, 0.5};
  EXPECT_EQ(pb_exact_distribution(b), (std::vector<double>{0.25, 0.5, 0.25}));
  const std::vector<double> c{0.1, 0.2, 0.3};
  const auto pmf = pb_exact_distribution(c);
  const double expected[] = {0.504, 0.398, 0.092, 0.006};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(pmf[k], expected[k], 1e-15);
  EXPECT_EQ(pmf_quantile(pmf, 0.5), 0u);
  EXPECT_EQ(pmf_quantile(pmf, 0.9), 1u);
  EXPECT_EQ(pmf_quantile(pmf, 0.999), 3u);
}

TEST(PbExact, SizeCap) {
  const std::vector<double> big(kPbExactMaxSize + 1, 0.5);
  EXPECT_THROW(pb_exact_distribution(big), ConfigError);
}

TEST(MaxSgCaps, ExpandMultiplicatively) {
  const SampleConfig c{2, {3, 2}, 0};
  EXPECT_EQ(maxsg_vertex_caps(c, 1'000'000), (std::vector<std::uint64_t>{8, 14}));
  EXPECT_EQ(maxsg_edge_caps(c, 1'000'000), (std::vector<std::uint64_t>{6, 12}));
  EXPECT_EQ(maxsg_vertex_caps(c, 10), (std::vector<std::uint64_t>{8, 10}));
  // Saturating products.
  const SampleConfig huge{4'000'000'000u, {4'000'000'000u, 4'000'000'000u}, 0};
  EXPECT_EQ(maxsg_vertex_caps(huge, ~0ull).back(), ~0ull);
}

class EnvelopeTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    graph_ = new CsrGraph(generate({GraphKind::kPowerLaw, 20000, 400000, 2.1}, 5));
  }
  static void TearDownTestSuite() { delete graph_; }
  static CsrGraph* graph_;
};
CsrGraph* EnvelopeTest::graph_ = nullptr;

TEST_F(EnvelopeTest, ZeroFanout) {
  const EnvelopeSpec e = compute_envelope(*graph_, {16, {0}, 0}, 0.999, 1000);
  EXPECT_EQ(e.v_max_total, 16u);
  EXPECT_EQ(e.e_max_per_hop, (std::vector<std::uint64_t>{0}));
  EXPECT_EQ(e.range_bound, 0.0);
}

TEST_F(EnvelopeTest, ClampedAndDominatedByMaxSg) {
  for (std::uint32_t b : {1u, 64u, 1024u}) {
    for (const auto& f : {std::vector<std::uint32_t>{25}, {10, 10}, {15, 10, 5}}) {
      const SampleConfig c{b, f, 0};
      const EnvelopeSpec e = compute_envelope(*graph_, c, 0.999, 1000, 1.5);
      const auto vcap = maxsg_vertex_caps(c, graph_->num_vertices());
      const auto ecap = maxsg_edge_caps(c, graph_->num_vertices());
      EXPECT_LE(e.v_max_total, graph_->num_vertices());
      for (std::size_t h = 0; h < f.size(); ++h) {
        EXPECT_LE(e.v_max_per_hop[h], vcap[h]);
        EXPECT_LE(e.e_max_per_hop[h], ecap[h]);
        EXPECT_GE(e.v_max_per_hop[h], b);
      }
    }
  }
}

TEST_F(EnvelopeTest, Monotonicity) {
  const SampleConfig c{256, {10, 10}, 0};
  const auto total = [&](double p, std::uint64_t m, double sf) {
    return compute_envelope(*graph_, c, p, m, sf).v_max_total;
  };
  EXPECT_LE(total(0.9, 100, 1.0), total(0.99, 100, 1.0));
  EXPECT_LE(total(0.99, 100, 1.0), total(0.999, 100, 1.0));
  EXPECT_LE(total(0.99, 10, 1.0), total(0.99, 1000, 1.0));
  EXPECT_LE(total(0.99, 100, 1.0), total(0.99, 100, 1.2));
  EXPECT_LE(compute_envelope(*graph_, {256, {10, 5}, 0}, 0.99, 100).v_max_total,
            compute_envelope(*graph_, {256, {10, 10}, 0}, 0.99, 100).v_max_total);
}

TEST_F(EnvelopeTest, MedianEnvelopeAtMean) {
  const SampleConfig c{128, {10}, 0};
  const EnvelopeSpec e = compute_envelope(*graph_, c, 0.5, 1);
  EXPECT_EQ(e.z, 0.0);
  EXPECT_EQ(e.v_max_total, static_cast<std::uint64_t>(std::ceil(e.mu_per_hop[0])) + 128);
}

TEST_F(EnvelopeTest, FrontierBoundAndEdges) {
  const SampleConfig c{64, {10, 4}, 0};
  const EnvelopeSpec e = compute_envelope(*graph_, c, 0.999, 100);
  EXPECT_EQ(e.frontier_bound(1), 64u);
  EXPECT_EQ(e.frontier_bound(2), e.v_max_per_hop[0] - 64);
  EXPECT_EQ(e.e_max_per_hop[0], 640u);
  EXPECT_EQ(e.e_max_per_hop[1], (e.v_max_per_hop[0] - 64) * 4);
}

TEST_F(EnvelopeTest, Errors) {
  EXPECT_THROW(compute_envelope(*graph_, {8, {2}, 0}, 0.99, 10, 0.9), ConfigError);
  EXPECT_THROW(compute_envelope(*graph_, {8, {2}, 0}, 1.0, 10), DomainError);
  EXPECT_THROW(compute_envelope(CsrGraph::from_edges(4, {}), {1, {2}, 0}, 0.9, 1), ModelError);
  EXPECT_THROW(compute_envelope(*graph_, {30000, {2}, 0}, 0.9, 1), ConfigError);
}

TEST_F(EnvelopeTest, JsonRoundTrip) {
  const EnvelopeSpec e = compute_envelope(*graph_, {32, {5, 5}, 0}, 0.99, 50, 1.2);
  EXPECT_EQ(envelope_from_json(envelope_to_json(e)), e);
  EXPECT_THROW(envelope_from_json("{\"confidence\": 0.9}"), ConfigError);
  EXPECT_THROW(envelope_from_json("{"), ParseError);
}

TEST(CheckOverflow, InclusiveBounds) {
  EnvelopeSpec e;
  e.batch_size = 2;
  e.v_max_per_hop = {10, 20};
  e.e_max_per_hop = {6, 30};
  e.v_max_total = 20;
  IterationMetadata m;
  m.batch_size = 2;
  m.per_hop_vertex_counts = {10, 20};
  m.per_hop_edge_counts = {6, 30};
  m.total_unique_vertices = 20;
  EXPECT_FALSE(check_overflow(m, e).any());

  m.per_hop_vertex_counts[1] = 21;
  m.total_unique_vertices = 21;
  const OverflowFlags f = check_overflow(m, e);
  EXPECT_EQ(f.per_hop, (std::vector<bool>{false, true}));

  m.per_hop_vertex_counts[1] = 20;
  m.per_hop_edge_counts[0] = 7;
  EXPECT_EQ(check_overflow(m, e).per_hop, (std::vector<bool>{true, false}));

  m.per_hop_vertex_counts.pop_back();
  m.per_hop_edge_counts.pop_back();
  EXPECT_THROW(check_overflow(m, e), ConfigError);
}

TEST(CheckOverflow, ZeroFanoutNeverOverflows) {
  const CsrGraph g = generate({GraphKind::kPowerLaw, 1000, 10000, 2.1}, 1);
  const SampleConfig c{10, {0}, 0};
  const EnvelopeSpec e = compute_envelope(g, c, 0.9, 1);
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    EXPECT_FALSE(check_overflow(sample_iteration(g, c, rng).metadata, e).any());
  }
}

}  // namespace
}  // namespace gnnsim
