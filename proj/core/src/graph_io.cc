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

#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <string_view>

#include "gnnsim/error.h"
#include "gnnsim/graph.h"

namespace gnnsim {
namespace {

constexpr std::uint64_t kMaxVertexId = std::numeric_limits<VertexId>::max() - 1;

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Splits off the next whitespace-delimited token.
std::string_view next_token(std::string_view& s) {
  s = trim(s);
  std::size_t end = 0;
  while (end < s.size() && s[end] != ' ' && s[end] != '\t') ++end;
  std::string_view token = s.substr(0, end);
  s.remove_prefix(end);
  return token;
}

std::uint64_t parse_id(std::string_view token, std::size_t line) {
  if (token.empty()) throw ParseError(line, "expected \"src dst\"");
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw RangeError("line " + std::to_string(line) + ": vertex id '" +
                     std::string(token) + "' overflows 64 bits");
  }
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "invalid vertex id '" + std::string(token) + "'");
  }
  return value;
}

struct RawEdge {
  std::uint64_t src;
  std::uint64_t dst;
};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> buf;
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf.data(), buf.size());
}

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> buf;
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf.data(), buf.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> buf;
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (!in) throw ConfigError("binary CSR: unexpected end of input");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<T>(buf[i]) << (8 * i);
  }
  return v;
}

}  // namespace

CsrGraph load_edge_list(std::istream& in, const EdgeListOptions& options) {
  std::optional<std::uint64_t> declared;
  if (options.num_vertices) declared = *options.num_vertices;

  std::vector<RawEdge> raw;
  std::uint64_t max_id = 0;
  bool any = false;
  std::string buffer;
  std::size_t line_no = 0;
  while (std::getline(in, buffer)) {
    ++line_no;
    std::string_view line = trim(buffer);
    if (line.empty() || line.front() == '#') continue;
    if (line.starts_with("n=")) {
      const std::string_view count = trim(line.substr(2));
      std::uint64_t n = 0;
      const auto [ptr, ec] =
          std::from_chars(count.data(), count.data() + count.size(), n);
      if (ec != std::errc() || ptr != count.data() + count.size()) {
        throw ParseError(line_no, "invalid header '" + std::string(line) + "'");
      }
      declared = n;
      continue;
    }
    const std::uint64_t src = parse_id(next_token(line), line_no);
    const std::uint64_t dst = parse_id(next_token(line), line_no);
    if (!trim(line).empty()) {
      throw ParseError(line_no, "trailing characters after \"src dst\"");
    }
    raw.push_back({src, dst});
    max_id = std::max({max_id, src, dst});
    any = true;
  }

  std::size_t num_vertices = 0;
  std::vector<Edge> edges;
  edges.reserve(raw.size() * (options.symmetrize ? 2 : 1));

  if (options.compact_ids) {
    std::map<std::uint64_t, VertexId> remap;
    for (const RawEdge& e : raw) {
      remap.emplace(e.src, 0);
      remap.emplace(e.dst, 0);
    }
    if (remap.size() > kMaxVertexId + 1) {
      throw RangeError("too many distinct vertex ids for 32-bit ids");
    }
    VertexId next = 0;
    for (auto& [id, local] : remap) local = next++;
    num_vertices = remap.size();
    for (const RawEdge& e : raw) {
      edges.push_back({remap[e.src], remap[e.dst]});
    }
  } else {
    if (any && max_id > kMaxVertexId) {
      throw RangeError("vertex id " + std::to_string(max_id) +
                       " does not fit a 32-bit vertex id");
    }
    const std::uint64_t inferred = any ? max_id + 1 : 0;
    if (declared && any && max_id >= *declared) {
      throw RangeError("vertex id " + std::to_string(max_id) +
                       " exceeds declared vertex count " +
                       std::to_string(*declared));
    }
    const std::uint64_t n = declared ? std::max(*declared, inferred) : inferred;
    if (n > kMaxVertexId + 1) {
      throw RangeError("vertex count " + std::to_string(n) +
                       " does not fit 32-bit vertex ids");
    }
    num_vertices = static_cast<std::size_t>(n);
    for (const RawEdge& e : raw) {
      edges.push_back(
          {static_cast<VertexId>(e.src), static_cast<VertexId>(e.dst)});
    }
  }

  if (options.symmetrize) {
    const std::size_t forward = edges.size();
    for (std::size_t i = 0; i < forward; ++i) {
      edges.push_back({edges[i].dst, edges[i].src});
    }
  }
  return CsrGraph::from_edges(num_vertices, edges);
}

CsrGraph load_edge_list_file(const std::filesystem::path& path,
                             const EdgeListOptions& options) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open edge list '" + path.string() + "'");
  return load_edge_list(in, options);
}

void write_edge_list(std::ostream& out, const CsrGraph& graph) {
  out << "n=" << graph.num_vertices() << '\n';
  for (std::size_t v = 0; v < graph.num_vertices(); ++v) {
    for (VertexId t : graph.neighbors(static_cast<VertexId>(v))) {
      out << v << ' ' << t << '\n';
    }
  }
}

void write_binary_csr(std::ostream& out, const CsrGraph& graph) {
  out.write("CSR1", 4);
  put_u64(out, graph.num_vertices());
  put_u64(out, graph.num_edges());
  for (EdgeIndex o : graph.offsets()) put_u64(out, o);
  for (VertexId t : graph.targets()) put_u32(out, t);
}

CsrGraph read_binary_csr(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "CSR1", 4) != 0) {
    throw ConfigError("binary CSR: bad magic");
  }
  const auto n = get_le<std::uint64_t>(in);
  const auto m = get_le<std::uint64_t>(in);
  if (n > kMaxVertexId + 1) throw RangeError("binary CSR: vertex count too large");
  std::vector<EdgeIndex> offsets(n + 1);
  for (auto& o : offsets) o = get_le<std::uint64_t>(in);
  std::vector<VertexId> targets(m);
  for (auto& t : targets) t = get_le<std::uint32_t>(in);
  return CsrGraph(std::move(offsets), std::move(targets));
}

}  // namespace gnnsim
