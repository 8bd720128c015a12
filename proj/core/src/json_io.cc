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

#include <fstream>
#include <sstream>
#include <string>

#include "gnnsim/envelope.h"
#include "gnnsim/error.h"
#include "gnnsim/exec_model.h"
#include "gnnsim/sampler.h"
#include "json_util.h"

namespace gnnsim {

using detail::get_as;
using detail::Json;

std::string subgraph_to_json(const SampleResult& result) {
  const IterationMetadata& md = result.metadata;
  Json j;
  j["batch_size"] = md.batch_size;
  j["per_hop_vertex_counts"] = md.per_hop_vertex_counts;
  j["per_hop_edge_counts"] = md.per_hop_edge_counts;
  j["total_unique_vertices"] = md.total_unique_vertices;
  j["total_edges"] = md.total_edges;
  j["local_to_global"] = std::vector<VertexId>(
      result.subgraph.local_to_global().begin(), result.subgraph.local_to_global().end());
  Json hops = Json::array();
  for (const HopBlock& b : result.subgraph.hops()) {
    Json h;
    h["hop"] = b.hop_index;
    h["src_local"] = b.src_local;
    h["dst_unique_local"] = b.dst_unique_local;
    Json edges = Json::array();
    for (const LocalEdge& e : b.edges) edges.push_back({e.src, e.dst});
    h["edges"] = std::move(edges);
    hops.push_back(std::move(h));
  }
  j["hops"] = std::move(hops);
  return j.dump();
}

std::string envelope_to_json(const EnvelopeSpec& e) {
  Json j;
  j["confidence"] = e.confidence;
  j["repetitions"] = e.repetitions;
  j["z"] = e.z;
  j["safety_factor"] = e.safety_factor;
  j["batch_size"] = e.batch_size;
  j["fanouts"] = e.fanouts;
  j["num_vertices"] = e.num_vertices;
  j["mu_per_hop"] = e.mu_per_hop;
  j["sigma_per_hop"] = e.sigma_per_hop;
  j["v_max_per_hop"] = e.v_max_per_hop;
  j["e_max_per_hop"] = e.e_max_per_hop;
  j["v_max_total"] = e.v_max_total;
  j["range_bound"] = e.range_bound;
  return j.dump(2);
}

EnvelopeSpec envelope_from_json(const std::string& text) {
  const Json j = detail::parse_json(text);
  constexpr std::string_view kWhere = "envelope";
  detail::check_keys(j,
                     {"confidence", "repetitions", "z", "safety_factor",
                      "batch_size", "fanouts", "num_vertices", "mu_per_hop",
                      "sigma_per_hop", "v_max_per_hop", "e_max_per_hop",
                      "v_max_total", "range_bound"},
                     kWhere);
  EnvelopeSpec e;
  try {
    e.confidence = get_as<double>(j, "confidence", kWhere);
    e.repetitions = get_as<std::uint64_t>(j, "repetitions", kWhere);
    e.z = get_as<double>(j, "z", kWhere);
    e.safety_factor = get_as<double>(j, "safety_factor", kWhere);
    e.batch_size = get_as<std::uint32_t>(j, "batch_size", kWhere);
    e.fanouts = detail::field(j, "fanouts", kWhere).get<std::vector<std::uint32_t>>();
    e.num_vertices = get_as<std::uint64_t>(j, "num_vertices", kWhere);
    e.mu_per_hop = detail::field(j, "mu_per_hop", kWhere).get<std::vector<double>>();
    e.sigma_per_hop = detail::field(j, "sigma_per_hop", kWhere).get<std::vector<double>>();
    e.v_max_per_hop =
        detail::field(j, "v_max_per_hop", kWhere).get<std::vector<std::uint64_t>>();
    e.e_max_per_hop =
        detail::field(j, "e_max_per_hop", kWhere).get<std::vector<std::uint64_t>>();
    e.v_max_total = get_as<std::uint64_t>(j, "v_max_total", kWhere);
    e.range_bound = get_as<double>(j, "range_bound", kWhere);
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("envelope: ") + ex.what());
  }
  const std::size_t hops = e.fanouts.size();
  if (e.v_max_per_hop.size() != hops || e.e_max_per_hop.size() != hops ||
      e.mu_per_hop.size() != hops || e.sigma_per_hop.size() != hops) {
    throw ConfigError("envelope: per-hop arrays disagree with the fanout count");
  }
  return e;
}

CostModel cost_model_from_json(const std::string& text) {
  const Json j = detail::parse_json(text);
  constexpr std::string_view kWhere = "cost model";
  detail::check_keys(j,
                     {"notes", "host_launch_latency", "sync_export_latency",
                      "host_logic_latency", "graph_replay_latency",
                      "pilot_child_launch_latency", "early_exit_block_cost",
                      "block_quota", "kernels"},
                     kWhere);
  CostModel c;
  c.host_launch_latency = get_as<double>(j, "host_launch_latency", kWhere);
  c.sync_export_latency = get_as<double>(j, "sync_export_latency", kWhere);
  c.host_logic_latency = get_as<double>(j, "host_logic_latency", kWhere);
  c.graph_replay_latency = get_as<double>(j, "graph_replay_latency", kWhere);
  c.pilot_child_launch_latency = get_as<double>(j, "pilot_child_launch_latency", kWhere);
  c.early_exit_block_cost = get_as<double>(j, "early_exit_block_cost", kWhere);
  c.block_quota = get_as<std::uint64_t>(j, "block_quota", kWhere);
  if (j.contains("kernels")) {
    const Json& kernels = j.at("kernels");
    detail::require_object(kernels, "cost model kernels");
    for (const auto& item : kernels.items()) {
      const std::string where = "kernel " + item.key();
      detail::check_keys(item.value(), {"a", "b_v", "b_e", "b_f"}, where);
      KernelCoefficients k;
      k.a = detail::get_or<double>(item.value(), "a", 0.0, where);
      k.b_v = detail::get_or<double>(item.value(), "b_v", 0.0, where);
      k.b_e = detail::get_or<double>(item.value(), "b_e", 0.0, where);
      k.b_f = detail::get_or<double>(item.value(), "b_f", 0.0, where);
      c.kernels[parse_kernel_stage(item.key())] = k;
    }
  }
  c.validate();
  return c;
}

CostModel load_cost_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open cost model " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return cost_model_from_json(buf.str());
}

std::string cost_model_to_json(const CostModel& c, const std::string& notes) {
  Json j;
  if (!notes.empty()) j["notes"] = notes;
  j["host_launch_latency"] = c.host_launch_latency;
  j["sync_export_latency"] = c.sync_export_latency;
  j["host_logic_latency"] = c.host_logic_latency;
  j["graph_replay_latency"] = c.graph_replay_latency;
  j["pilot_child_launch_latency"] = c.pilot_child_launch_latency;
  j["early_exit_block_cost"] = c.early_exit_block_cost;
  j["block_quota"] = c.block_quota;
  Json kernels = Json::object();
  for (KernelStage s : kAllStages) {
    const auto it = c.kernels.find(s);
    if (it == c.kernels.end()) continue;
    kernels[to_string(s)] = {{"a", it->second.a},
                             {"b_v", it->second.b_v},
                             {"b_e", it->second.b_e},
                             {"b_f", it->second.b_f}};
  }
  j["kernels"] = std::move(kernels);
  return j.dump(2);
}

}  // namespace gnnsim
