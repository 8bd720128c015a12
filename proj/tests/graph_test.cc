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

#include <algorithm>
#include <sstream>
#include <vector>

#include "gnnsim/error.h"
#include "gnnsim/graph.h"
#include "test_support.h"

namespace gnnsim {
namespace {

std::vector<EdgeIndex> offsets_of(const CsrGraph& g) {
  return {g.offsets().begin(), g.offsets().end()};
}
std::vector<VertexId> targets_of(const CsrGraph& g) {
  return {g.targets().begin(), g.targets().end()};
}

CsrGraph parse(const std::string& text, EdgeListOptions opts = {}) {
  std::istringstream in(text);
  return load_edge_list(in, opts);
}

TEST(EdgeList, ThreeEdges) {
  const CsrGraph g = parse("0 1\n0 2\n1 2\n");
  EXPECT_EQ(offsets_of(g), (std::vector<EdgeIndex>{0, 2, 3, 3}));
  EXPECT_EQ(targets_of(g), (std::vector<VertexId>{1, 2, 2}));
}

TEST(EdgeList, EmptyWithDeclaredCount) {
  const CsrGraph g = parse("", {.num_vertices = 3});
  EXPECT_EQ(offsets_of(g), (std::vector<EdgeIndex>{0, 0, 0, 0}));
  EXPECT_EQ(g.num_edges(), 0u);
}

TEST(EdgeList, MalformedLineReportsLine) {
  try {
    parse("0 x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    parse("# header\n0 1\n1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse("0 1 2\n"), ParseError);
  EXPECT_THROW(parse("-1 2\n"), ParseError);
}

TEST(EdgeList, IdOverflowIsRangeError) {
  EXPECT_THROW(parse("4294967296 1\n"), RangeError);
  EXPECT_THROW(parse("99999999999999999999999 1\n"), RangeError);
  EXPECT_THROW(parse("n=2\n0 5\n"), RangeError);
}

TEST(EdgeList, TargetsKeepInputOrder) {
  const CsrGraph g = parse("1 0\n0 3\n1 2\n0 1\n");
  EXPECT_EQ(targets_of(g), (std::vector<VertexId>{3, 1, 0, 2}));
}

TEST(EdgeList, HeaderCommentsAndSymmetrize) {
  const CsrGraph g = parse("# comment\nn=5\n0 1\n", {.num_vertices = {}, .symmetrize = true});
  EXPECT_EQ(g.num_vertices(), 5u);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.degree(1), 1u);
  EXPECT_EQ(g.neighbors(1)[0], 0u);
}

TEST(EdgeList, CompactIds) {
  const CsrGraph g = parse("10 500\n500 7\n", {.num_vertices = {}, .compact_ids = true});
  // ids 7, 10, 500 -> 0, 1, 2
  EXPECT_EQ(g.num_vertices(), 3u);
  EXPECT_EQ(offsets_of(g), (std::vector<EdgeIndex>{0, 0, 1, 2}));
  EXPECT_EQ(targets_of(g), (std::vector<VertexId>{2, 0}));
}

TEST(Csr, ConstructorValidates) {
  EXPECT_THROW(CsrGraph({1, 1}, {0}), ConfigError);
  EXPECT_THROW(CsrGraph({0, 2}, {0}), ConfigError);
  EXPECT_THROW(CsrGraph({0, 1, 0}, {}), ConfigError);
  EXPECT_THROW(CsrGraph({0, 1}, {3}), ConfigError);
  EXPECT_THROW(CsrGraph::from_edges(2, std::vector<Edge>{{0, 2}}), RangeError);
}

TEST(Csr, RoundTripProperty) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const CsrGraph g = testing::random_graph(rng);
    std::stringstream text;
    write_edge_list(text, g);
    EXPECT_EQ(load_edge_list(text), g);

    std::stringstream bin;
    write_binary_csr(bin, g);
    EXPECT_EQ(read_binary_csr(bin), g);

    EdgeIndex running = 0;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
      ASSERT_EQ(g.offsets()[v], running);
      running += g.degree(static_cast<VertexId>(v));
    }
    EXPECT_EQ(running, g.num_edges());
    EXPECT_EQ(total_degree(g), g.num_edges());
  }
}

TEST(BinaryCsr, RejectsBadMagicAndTruncation) {
  std::stringstream bad("CSR2xxxxxxxxxxxxxxxx");
  EXPECT_THROW(read_binary_csr(bad), ConfigError);
  std::stringstream full;
  write_binary_csr(full, generate({GraphKind::kComplete, 3, 0, 2.1}, 0));
  std::string bytes = full.str();
  std::stringstream cut(bytes.substr(0, bytes.size() - 2));
  EXPECT_THROW(read_binary_csr(cut), ConfigError);
}

TEST(Generate, Star) {
  const CsrGraph g = generate({GraphKind::kStar, 5, 0, 2.1}, 1);
  EXPECT_EQ(g.degree(0), 4u);
  for (VertexId v = 1; v < 5; ++v) EXPECT_EQ(g.degree(v), 0u);
}

TEST(Generate, CompleteAndRing) {
  const CsrGraph g = generate({GraphKind::kComplete, 3, 0, 2.1}, 1);
  EXPECT_EQ(g.num_edges(), 6u);
  for (VertexId v = 0; v < 3; ++v) EXPECT_EQ(g.degree(v), 2u);
  EXPECT_EQ(total_degree(g), 6u);

  const CsrGraph r = generate({GraphKind::kRing, 4, 0, 2.1}, 1);
  EXPECT_EQ(r.neighbors(3)[0], 0u);
}

TEST(Generate, EmptyGraphTotalDegree) { EXPECT_EQ(total_degree(CsrGraph()), 0u); }

TEST(Generate, PowerLawDeterministicAndExactEdgeCount) {
  const GraphGenSpec spec{GraphKind::kPowerLaw, 100000, 1000000, 2.1};
  const CsrGraph a = generate(spec, 42);
  const CsrGraph b = generate(spec, 42);
  EXPECT_EQ(a, b);
  EXPECT_EQ(total_degree(a), 1000000u);
  EXPECT_NE(generate(spec, 43), a);
}

TEST(Generate, PowerLawHeavyTail) {
  for (double exponent : {2.1, 2.5}) {
    const CsrGraph g = generate({GraphKind::kPowerLaw, 10000, 100000, exponent}, 7);
    std::vector<EdgeIndex> deg(g.num_vertices());
    for (std::size_t v = 0; v < deg.size(); ++v) deg[v] = g.degree(static_cast<VertexId>(v));
    const EdgeIndex max_deg = *std::max_element(deg.begin(), deg.end());
    std::nth_element(deg.begin(), deg.begin() + deg.size() / 2, deg.end());
    const EdgeIndex median = deg[deg.size() / 2];
    EXPECT_GE(max_deg, 10 * std::max<EdgeIndex>(median, 1)) << "exponent " << exponent;
  }
}

TEST(Generate, UniformEdgeCount) {
  const CsrGraph g = generate({GraphKind::kUniformRandom, 1000, 5000, 2.1}, 3);
  EXPECT_EQ(g.num_edges(), 5000u);
}

TEST(Generate, InfeasibleSpecs) {
  EXPECT_THROW(generate({GraphKind::kUniformRandom, 3, 10, 2.1}, 0), ConfigError);
  EXPECT_THROW(generate({GraphKind::kPowerLaw, 100, 50, 1.0}, 0), ConfigError);
  EXPECT_THROW(generate({GraphKind::kPowerLaw, 0, 50, 2.0}, 0), ConfigError);
  EXPECT_THROW(parse_graph_kind("lattice"), ConfigError);
}

}  // namespace
}  // namespace gnnsim
