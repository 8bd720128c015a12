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

#include "gnnsim/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "gnnsim/error.h"
#include "json_util.h"

namespace gnnsim {

using detail::get_as;
using detail::get_or;
using detail::Json;

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& values, char sep = ';') {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(values[i]);
  }
  return out;
}

std::vector<std::uint32_t> u32_list(const Json& j, std::string_view key,
                                    std::string_view where) {
  const Json& v = detail::field(j, key, where);
  if (!v.is_array()) {
    throw ConfigError(std::string(where) + ": '" + std::string(key) + "' must be an array");
  }
  std::vector<std::uint32_t> out;
  for (const Json& x : v) {
    if (!x.is_number_integer() || x.get<std::int64_t>() < 0 ||
        x.get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max()) {
      throw ConfigError(std::string(where) + ": '" + std::string(key) +
                        "' must hold nonnegative 32-bit integers");
    }
    out.push_back(x.get<std::uint32_t>());
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<double> unique_sizes(const std::vector<IterationMetadata>& its) {
  std::vector<double> v;
  v.reserve(its.size());
  for (const IterationMetadata& m : its) {
    v.push_back(static_cast<double>(m.total_unique_vertices));
  }
  return v;
}

ExecMetrics mean_of(const EpochMetrics& epoch) {
  ExecMetrics m = epoch.total;
  if (epoch.iterations == 0) return m;
  const double n = static_cast<double>(epoch.iterations);
  m.gpu_time /= n;
  m.host_time /= n;
  m.early_exit_time /= n;
  m.launches /= epoch.iterations;
  m.syncs /= epoch.iterations;
  m.end_to_end = m.gpu_time + m.host_time;
  m.hdoo = m.host_time;
  m.gpu_execution_fraction = m.end_to_end > 0.0 ? m.gpu_time / m.end_to_end : 0.0;
  return m;
}

IterationMetadata sample_one(const CsrGraph& graph, const SampleConfig& config,
                             std::uint64_t seed) {
  Rng rng(seed);
  return sample_iteration(graph, config, rng).metadata;
}

}  // namespace

std::uint64_t command_seed(std::uint64_t master_seed, SeedTag tag) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(tag));
}

void ExperimentConfig::validate() const {
  sample.validate();
  if (!graph.spec && graph.path.empty()) {
    throw ConfigError("graph needs either a generator spec or a path");
  }
  if (graph.spec) graph.spec->validate();
  if (iterations < 1) throw ConfigError("iterations must be at least 1");
  if (!(envelope.confidence > 0.0 && envelope.confidence < 1.0)) {
    throw ConfigError("envelope confidence must lie in (0, 1)");
  }
  if (repetitions() < 1) throw ConfigError("envelope repetitions must be at least 1");
  if (!(envelope.safety_factor >= 1.0)) throw ConfigError("safety_factor must be >= 1");
  if (layers < 1) throw ConfigError("layers must be at least 1");
  if (!(allreduce_cost >= 0.0)) throw ConfigError("allreduce_cost must be >= 0");
  if (sweep.batch_sizes.empty() || sweep.depths.empty() ||
      sweep.strategies.empty() || sweep.workers.empty()) {
    throw ConfigError("sweep lists must not be empty");
  }
  for (std::uint32_t b : sweep.batch_sizes) {
    if (b < 1) throw ConfigError("sweep batch sizes must be >= 1");
  }
  for (std::uint32_t d : sweep.depths) {
    if (d < 1) throw ConfigError("sweep depths must be >= 1");
  }
  for (std::uint32_t w : sweep.workers) {
    if (w < 1) throw ConfigError("sweep worker counts must be >= 1");
  }
}

ExperimentConfig parse_experiment_config(const std::string& text,
                                         const std::filesystem::path& base_dir) {
  const Json j = detail::parse_json(text);
  detail::check_keys(j,
                     {"graph", "sample", "envelope", "cost_model", "iterations",
                      "layers", "feature_dim", "sweep", "allreduce_cost",
                      "output", "master_seed"},
                     "config");
  const auto resolve_path = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };

  ExperimentConfig c;
  const Json& g = detail::field(j, "graph", "config");
  detail::require_object(g, "graph");
  if (g.contains("path")) {
    detail::check_keys(g, {"path", "format", "symmetrize", "compact_ids"}, "graph");
    c.graph.path = resolve_path(get_as<std::string>(g, "path", "graph"));
    c.graph.format = get_or<std::string>(g, "format", "edgelist", "graph");
    c.graph.symmetrize = get_or<bool>(g, "symmetrize", false, "graph");
    c.graph.compact_ids = get_or<bool>(g, "compact_ids", false, "graph");
  } else {
    detail::check_keys(g, {"kind", "num_vertices", "target_edges", "exponent"}, "graph");
    GraphGenSpec spec;
    spec.kind = parse_graph_kind(get_as<std::string>(g, "kind", "graph"));
    spec.num_vertices = get_as<std::uint64_t>(g, "num_vertices", "graph");
    spec.target_edges = get_or<std::uint64_t>(g, "target_edges", 0, "graph");
    spec.exponent = get_or<double>(g, "exponent", 2.1, "graph");
    c.graph.spec = spec;
  }

  const Json& s = detail::field(j, "sample", "config");
  detail::check_keys(s, {"batch_size", "fanouts"}, "sample");
  c.sample.batch_size = get_as<std::uint32_t>(s, "batch_size", "sample");
  c.sample.fanouts = u32_list(s, "fanouts", "sample");

  if (j.contains("envelope")) {
    const Json& e = j.at("envelope");
    detail::check_keys(e, {"confidence", "repetitions", "safety_factor"}, "envelope");
    c.envelope.confidence = get_or<double>(e, "confidence", 0.999, "envelope");
    if (e.contains("repetitions")) {
      c.envelope.repetitions = get_as<std::uint64_t>(e, "repetitions", "envelope");
    }
    c.envelope.safety_factor = get_or<double>(e, "safety_factor", 1.0, "envelope");
  }
  if (j.contains("cost_model")) {
    c.cost_model = resolve_path(get_as<std::string>(j, "cost_model", "config"));
  }
  c.iterations = get_or<std::uint64_t>(j, "iterations", c.iterations, "config");
  c.layers = get_or<std::uint32_t>(j, "layers", c.layers, "config");
  c.feature_dim = get_or<std::uint32_t>(j, "feature_dim", c.feature_dim, "config");
  c.allreduce_cost = get_or<double>(j, "allreduce_cost", c.allreduce_cost, "config");
  if (j.contains("output")) {
    c.output = resolve_path(get_as<std::string>(j, "output", "config"));
  }
  c.master_seed = get_or<std::uint64_t>(j, "master_seed", 0, "config");

  c.sweep.batch_sizes = {c.sample.batch_size};
  c.sweep.depths = {static_cast<std::uint32_t>(c.sample.num_hops())};
  c.sweep.strategies.assign(std::begin(kAllStrategies), std::end(kAllStrategies));
  c.sweep.workers = {1};
  if (!c.sample.fanouts.empty()) c.sweep.depth_fanout = c.sample.fanouts.front();
  if (j.contains("sweep")) {
    const Json& w = j.at("sweep");
    detail::check_keys(w, {"batch_sizes", "depths", "depth_fanout", "strategies", "workers"},
                       "sweep");
    if (w.contains("batch_sizes")) c.sweep.batch_sizes = u32_list(w, "batch_sizes", "sweep");
    if (w.contains("depths")) c.sweep.depths = u32_list(w, "depths", "sweep");
    c.sweep.depth_fanout =
        get_or<std::uint32_t>(w, "depth_fanout", c.sweep.depth_fanout, "sweep");
    if (w.contains("strategies")) {
      const Json& list = w.at("strategies");
      if (!list.is_array()) throw ConfigError("sweep: 'strategies' must be an array");
      c.sweep.strategies.clear();
      for (const Json& x : list) {
        if (!x.is_string()) throw ConfigError("sweep: strategies must be strings");
        c.sweep.strategies.push_back(parse_strategy(x.get<std::string>()));
      }
    }
    if (w.contains("workers")) c.sweep.workers = u32_list(w, "workers", "sweep");
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_file(path), path.parent_path());
}

// Output of `gnnsim calibrate --config configs/reference.json`; keep in sync
// with calibration/default.json.
CostModel default_cost_model() {
  CostModel c;
  c.host_launch_latency = 6.0;
  c.sync_export_latency = 40.0;
  c.host_logic_latency = 0.5;
  c.graph_replay_latency = 0.5;
  c.pilot_child_launch_latency = 2.0;
  c.early_exit_block_cost = 0.0003221771982383787;
  c.block_quota = 256;
  c.kernels = {
      {KernelStage::kPreSample,
       {0.12585046806186667, 0.0012585046806186668, 0.0, 0.0}},
      {KernelStage::kSample,
       {0.12585046806186667, 0.0, 0.0006292523403093334, 0.0}},
      {KernelStage::kRelabel,
       {0.12585046806186667, 0.0, 0.0012585046806186668, 0.0}},
      {KernelStage::kScan,
       {0.0943878510464, 0.0003146261701546667, 0.0, 0.0}},
      {KernelStage::kBuild,
       {0.12585046806186667, 0.0003146261701546667, 0.0006292523403093334, 0.0}},
      {KernelStage::kGather,
       {0.12585046806186667, 0.0006292523403093334, 0.0, 2.5170093612373334e-05}},
      {KernelStage::kForward,
       {0.1887757020928, 0.0001258504680618667, 0.0012585046806186668, 5.034018722474667e-05}},
      {KernelStage::kBackward,
       {0.1887757020928, 0.0001258504680618667, 0.0025170093612373336, 0.00010068037444949334}},
  };
  return c;
}

CostModel resolve_cost_model(const ExperimentConfig& config) {
  return config.cost_model.empty() ? default_cost_model()
                                   : load_cost_model(config.cost_model);
}

CsrGraph load_graph(const GraphSource& source, std::uint64_t master_seed) {
  if (source.spec) {
    return generate(*source.spec, command_seed(master_seed, SeedTag::kGraph));
  }
  if (source.format == "edgelist") {
    EdgeListOptions opts;
    opts.symmetrize = source.symmetrize;
    opts.compact_ids = source.compact_ids;
    return load_edge_list_file(source.path, opts);
  }
  if (source.format == "csr") {
    std::ifstream in(source.path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + source.path.string());
    return read_binary_csr(in);
  }
  throw ConfigError("unknown graph format '" + source.format + "'");
}

Histogram make_histogram(const std::vector<double>& values, std::size_t bins) {
  if (bins == 0) throw ConfigError("histogram needs at least one bin");
  Histogram h;
  h.counts.assign(bins, 0);
  if (values.empty()) return h;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  h.lo = *lo;
  h.hi = *hi;
  const double width = (h.hi - h.lo) / static_cast<double>(bins);
  for (double v : values) {
    std::size_t idx = 0;
    if (width > 0.0) {
      idx = std::min(bins - 1, static_cast<std::size_t>((v - h.lo) / width));
    }
    ++h.counts[idx];
  }
  return h;
}

std::size_t count_peaks(const Histogram& histogram, double min_peak_fraction) {
  const auto& c = histogram.counts;
  if (c.empty()) return 0;
  const std::uint64_t tallest = *std::max_element(c.begin(), c.end());
  std::size_t peaks = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const std::uint64_t left = i > 0 ? c[i - 1] : 0;
    const std::uint64_t right = i + 1 < c.size() ? c[i + 1] : 0;
    if (c[i] > left && c[i] >= right &&
        static_cast<double>(c[i]) >= min_peak_fraction * static_cast<double>(tallest)) {
      ++peaks;
    }
  }
  return peaks;
}

SizeSummary summarize(const std::vector<double>& values) {
  SizeSummary s;
  if (values.empty()) return s;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  s.spread = s.mean > 0.0 ? (s.max - s.min) / s.mean : 0.0;
  return s;
}

std::vector<IterationMetadata> sample_iterations(const CsrGraph& graph,
                                                 const SampleConfig& config,
                                                 std::uint64_t iterations,
                                                 std::uint64_t seed) {
  std::vector<IterationMetadata> out;
  out.reserve(iterations);
  for (std::uint64_t i = 0; i < iterations; ++i) {
    out.push_back(sample_one(graph, config, derive_seed(seed, i)));
  }
  return out;
}

SampleStatsResult run_sample_stats(const CsrGraph& graph, const SampleConfig& config,
                                   std::uint64_t iterations, std::uint64_t seed) {
  SampleStatsResult r;
  r.iterations = sample_iterations(graph, config, iterations, seed);
  const std::vector<double> sizes = unique_sizes(r.iterations);
  r.summary = summarize(sizes);
  r.histogram = make_histogram(sizes, 10);
  return r;
}

EnvelopeCheckResult run_envelope_check(const CsrGraph& graph,
                                       const SampleConfig& config,
                                       const EnvelopeParams& params,
                                       std::uint64_t iterations,
                                       std::uint64_t seed) {
  EnvelopeCheckResult r;
  r.envelope = compute_envelope(graph, config, params.confidence,
                                params.repetitions.value_or(iterations),
                                params.safety_factor);
  r.iterations = iterations;
  std::uint64_t covered = 0;
  std::vector<double> sizes;
  sizes.reserve(iterations);
  for (std::uint64_t i = 0; i < iterations; ++i) {
    const IterationMetadata md = sample_one(graph, config, derive_seed(seed, i));
    sizes.push_back(static_cast<double>(md.total_unique_vertices));
    if (md.total_unique_vertices <= r.envelope.v_max_total) ++covered;
    if (check_overflow(md, r.envelope).any()) ++r.overflow_count;
  }
  const double p = params.confidence;
  const double m = static_cast<double>(iterations);
  r.coverage = static_cast<double>(covered) / m;
  r.coverage_threshold = p - 3.0 * std::sqrt(p * (1.0 - p) / m);
  r.coverage_pass = r.coverage >= r.coverage_threshold;
  r.sizes = summarize(sizes);
  r.spread_over_range_bound = r.envelope.range_bound > 0.0
                                  ? r.sizes.spread / r.envelope.range_bound
                                  : (r.sizes.spread > 0.0
                                         ? std::numeric_limits<double>::infinity()
                                         : 0.0);
  return r;
}

ExecSimResult run_exec_sim(const CsrGraph& graph, const ExperimentConfig& config,
                           const CostModel& cost, std::uint64_t seed) {
  ExecSimResult result;
  const std::uint64_t n = graph.num_vertices();
  const std::uint64_t reps = config.repetitions();
  const auto& env_params = config.envelope;

  for (std::uint32_t batch : config.sweep.batch_sizes) {
    const std::uint64_t batch_seed = derive_seed(seed, batch);
    SampleConfig sc{batch, config.sample.fanouts, batch_seed};
    const PipelineGraph pipeline =
        build_pipeline(sc, config.layers, config.feature_dim, cost, n);
    const EnvelopeSpec env = compute_envelope(graph, sc, env_params.confidence, reps,
                                              env_params.safety_factor);
    const auto its = sample_iterations(graph, sc, config.iterations, batch_seed);
    const IterationMetadata safe =
        sample_one(graph, sc, derive_seed(batch_seed, kWarmupIteration));

    const EpochMetrics host_epoch = simulate_epoch(
        pipeline, Strategy::kHostMediated, its, &env, &safe, cost);
    const double host_time = mean_of(host_epoch).end_to_end;
    std::vector<double> single_time;
    for (Strategy s : config.sweep.strategies) {
      const EpochMetrics epoch = simulate_epoch(pipeline, s, its, &env, &safe, cost);
      ExecSimRow row;
      row.strategy = s;
      row.batch = batch;
      row.hops = static_cast<std::uint32_t>(sc.num_hops());
      row.mean = mean_of(epoch);
      row.overflows = epoch.overflows;
      row.speedup_vs_host = host_time / row.mean.end_to_end;
      single_time.push_back(row.mean.end_to_end);
      result.rows.push_back(row);
    }

    for (std::uint32_t g : config.sweep.workers) {
      if (g < 2 || batch % g != 0) continue;
      const std::uint64_t dp_seed = derive_seed(batch_seed, g);
      SampleConfig wc{batch / g, config.sample.fanouts, dp_seed};
      const PipelineGraph wp =
          build_pipeline(wc, config.layers, config.feature_dim, cost, n);
      const EnvelopeSpec wenv = compute_envelope(
          graph, wc, env_params.confidence, reps, env_params.safety_factor);
      const IterationMetadata wsafe =
          sample_one(graph, wc, derive_seed(dp_seed, kWarmupIteration));
      std::vector<std::vector<IterationMetadata>> steps;
      steps.reserve(config.iterations);
      for (std::uint64_t i = 0; i < config.iterations; ++i) {
        steps.push_back(sample_iterations(graph, wc, g, derive_seed(dp_seed, i)));
      }
      for (std::size_t si = 0; si < config.sweep.strategies.size(); ++si) {
        const Strategy s = config.sweep.strategies[si];
        double total = 0.0;
        for (const auto& workers : steps) {
          total += simulate_data_parallel(wp, s, workers, &wenv, &wsafe,
                                          config.allreduce_cost, cost)
                       .end_to_end;
        }
        DataParallelRow row;
        row.strategy = s;
        row.batch = batch;
        row.workers = g;
        row.single_time = single_time[si];
        row.parallel_time = total / static_cast<double>(config.iterations);
        row.speedup = row.single_time / row.parallel_time;
        result.data_parallel.push_back(row);
      }
    }
  }
  return result;
}

IterationMetadata peak_metadata(const std::vector<IterationMetadata>& iterations) {
  if (iterations.empty()) throw ConfigError("peak of an empty iteration list");
  IterationMetadata peak = iterations.front();
  for (const IterationMetadata& m : iterations) {
    if (m.num_hops() != peak.num_hops()) throw ConfigError("hop counts differ");
    for (std::size_t h = 0; h < m.num_hops(); ++h) {
      peak.per_hop_vertex_counts[h] =
          std::max(peak.per_hop_vertex_counts[h], m.per_hop_vertex_counts[h]);
      peak.per_hop_edge_counts[h] =
          std::max(peak.per_hop_edge_counts[h], m.per_hop_edge_counts[h]);
    }
    peak.total_unique_vertices =
        std::max(peak.total_unique_vertices, m.total_unique_vertices);
    peak.total_edges = std::max(peak.total_edges, m.total_edges);
  }
  return peak;
}

std::vector<MemoryCompareRow> run_memory_compare(const CsrGraph& graph,
                                                 const ExperimentConfig& config,
                                                 std::uint64_t seed) {
  std::vector<MemoryCompareRow> rows;
  const std::uint64_t n = graph.num_vertices();
  for (std::uint32_t depth : config.sweep.depths) {
    SampleConfig sc{config.sample.batch_size,
                    std::vector<std::uint32_t>(depth, config.sweep.depth_fanout),
                    derive_seed(seed, depth)};
    const EnvelopeSpec env =
        compute_envelope(graph, sc, config.envelope.confidence, config.repetitions(),
                         config.envelope.safety_factor);
    const auto its = sample_iterations(graph, sc, config.iterations, sc.seed);
    const MemoryPlan plans[] = {
        maxsg_plan(sc, config.feature_dim, n),
        exact_plan(peak_metadata(its), config.feature_dim),
        envelope_plan(env, config.feature_dim, sc.batch_size),
    };
    const PlanComparison cmp = compare_plans(plans);
    for (std::size_t i = 0; i < std::size(plans); ++i) {
      MemoryCompareRow row;
      row.strategy = plans[i].strategy;
      row.hops = depth;
      row.fanouts = sc.fanouts;
      row.vertex_caps = plans[i].vertex_caps;
      row.edge_caps = plans[i].edge_caps;
      row.total_bytes = plans[i].total_bytes;
      row.log2_vs_maxsg = cmp.log2_vs_maxsg[i];
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

CostModel calibrate_cost_model(const CsrGraph& graph, const ExperimentConfig& config,
                               const CostModel& base, double target_fraction,
                               double early_exit_share, std::uint64_t seed) {
  if (!(target_fraction > 0.0 && target_fraction < 1.0)) {
    throw ConfigError("target fraction must lie in (0, 1)");
  }
  const PipelineGraph pipeline = build_pipeline(config.sample, config.layers,
                                                config.feature_dim, base,
                                                graph.num_vertices());
  const auto its = sample_iterations(graph, config.sample, config.iterations, seed);
  const ExecMetrics m = mean_of(simulate_epoch(pipeline, Strategy::kHostMediated,
                                               its, nullptr, nullptr, base));
  if (m.gpu_time <= 0.0) throw ConfigError("base cost model has no device work");

  CostModel out = base;
  const double scale =
      target_fraction / (1.0 - target_fraction) * m.host_time / m.gpu_time;
  double cheapest = std::numeric_limits<double>::infinity();
  for (auto& [stage, k] : out.kernels) {
    k.a *= scale;
    k.b_v *= scale;
    k.b_e *= scale;
    k.b_f *= scale;
    const bool edge_grid = stage == KernelStage::kSample ||
                           stage == KernelStage::kRelabel ||
                           stage == KernelStage::kBuild ||
                           stage == KernelStage::kForward ||
                           stage == KernelStage::kBackward;
    const double driver = edge_grid ? k.b_e : k.b_v;
    if (driver > 0.0) cheapest = std::min(cheapest, driver);
  }
  if (std::isfinite(cheapest)) {
    out.early_exit_block_cost =
        early_exit_share * static_cast<double>(out.block_quota) * cheapest;
  }
  return out;
}

void write_sample_stats(const std::filesystem::path& dir, const SampleStatsResult& r) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "sample_stats.csv");
    const std::size_t hops = r.iterations.empty() ? 0 : r.iterations.front().num_hops();
    out << "iteration,total_unique_vertices,total_edges";
    for (std::size_t h = 1; h <= hops; ++h) {
      out << ",hop" << h << "_vertices,hop" << h << "_edges";
    }
    out << '\n';
    for (std::size_t i = 0; i < r.iterations.size(); ++i) {
      const IterationMetadata& m = r.iterations[i];
      out << i << ',' << m.total_unique_vertices << ',' << m.total_edges;
      for (std::size_t h = 0; h < m.num_hops(); ++h) {
        out << ',' << m.per_hop_vertex_counts[h] << ',' << m.per_hop_edge_counts[h];
      }
      out << '\n';
    }
  }
  {
    auto out = open_out(dir / "sample_stats_histogram.csv");
    out << "bin,lo,hi,count\n";
    const std::size_t bins = r.histogram.counts.size();
    const double width = bins ? (r.histogram.hi - r.histogram.lo) / bins : 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
      out << b << ',' << num(r.histogram.lo + width * b) << ','
          << num(r.histogram.lo + width * (b + 1)) << ',' << r.histogram.counts[b]
          << '\n';
    }
  }
  Json j;
  j["iterations"] = r.iterations.size();
  j["mean"] = r.summary.mean;
  j["min"] = r.summary.min;
  j["max"] = r.summary.max;
  j["spread_percent"] = 100.0 * r.summary.spread;
  j["histogram_peaks"] = count_peaks(r.histogram);
  open_out(dir / "sample_stats_summary.json") << j.dump(2) << '\n';
}

void write_envelope_check(const std::filesystem::path& dir,
                          const EnvelopeCheckResult& r) {
  std::filesystem::create_directories(dir);
  Json j;
  j["envelope"] = Json::parse(envelope_to_json(r.envelope));
  j["iterations"] = r.iterations;
  j["coverage"] = r.coverage;
  j["coverage_threshold"] = r.coverage_threshold;
  j["coverage_pass"] = r.coverage_pass;
  j["mean_unique_vertices"] = r.sizes.mean;
  j["min_unique_vertices"] = r.sizes.min;
  j["max_unique_vertices"] = r.sizes.max;
  j["observed_spread"] = r.sizes.spread;
  j["range_bound"] = r.envelope.range_bound;
  j["spread_over_range_bound"] = r.spread_over_range_bound;
  j["overflow_count"] = r.overflow_count;
  open_out(dir / "envelope_check.json") << j.dump(2) << '\n';
}

void write_exec_sim(const std::filesystem::path& dir, const ExecSimResult& r) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "exec_sim.csv");
    out << "strategy,batch,hops,end_to_end,gpu_time,host_time,fraction,launches,"
           "syncs,overflows,speedup_vs_host\n";
    for (const ExecSimRow& row : r.rows) {
      const ExecMetrics& m = row.mean;
      out << to_string(row.strategy) << ',' << row.batch << ',' << row.hops << ','
          << num(m.end_to_end) << ',' << num(m.gpu_time) << ',' << num(m.host_time)
          << ',' << (m.profile_opaque ? "NA" : num(m.gpu_execution_fraction)) << ','
          << m.launches << ',' << m.syncs << ',' << row.overflows << ','
          << num(row.speedup_vs_host) << '\n';
    }
  }
  auto out = open_out(dir / "data_parallel.csv");
  out << "strategy,batch,workers,single_time,parallel_time,speedup\n";
  for (const DataParallelRow& row : r.data_parallel) {
    out << to_string(row.strategy) << ',' << row.batch << ',' << row.workers << ','
        << num(row.single_time) << ',' << num(row.parallel_time) << ','
        << num(row.speedup) << '\n';
  }
}

void write_memory_compare(const std::filesystem::path& dir,
                          const std::vector<MemoryCompareRow>& rows) {
  std::filesystem::create_directories(dir);
  auto out = open_out(dir / "memory_compare.csv");
  out << "strategy,hops,fanouts,vertex_caps,edge_caps,total_bytes,log2_vs_maxsg\n";
  for (const MemoryCompareRow& row : rows) {
    out << to_string(row.strategy) << ',' << row.hops << ',' << join(row.fanouts)
        << ',' << join(row.vertex_caps) << ',' << join(row.edge_caps) << ','
        << row.total_bytes << ',' << num(row.log2_vs_maxsg) << '\n';
  }
}

void run_sweep(const ExperimentConfig& config, const std::filesystem::path& dir) {
  config.validate();
  std::filesystem::create_directories(dir);
  const std::uint64_t master = config.master_seed;
  const CsrGraph graph = load_graph(config.graph, master);
  const CostModel cost = resolve_cost_model(config);

  Json files = Json::array();
  const auto record = [&](const char* file, const char* command, std::uint64_t seed) {
    files.push_back({{"file", file}, {"command", command}, {"seed", seed}});
  };

  const std::uint64_t s_stats = command_seed(master, SeedTag::kSampleStats);
  write_sample_stats(dir, run_sample_stats(graph, config.sample, config.iterations, s_stats));
  record("sample_stats.csv", "sample-stats", s_stats);
  record("sample_stats_histogram.csv", "sample-stats", s_stats);
  record("sample_stats_summary.json", "sample-stats", s_stats);

  const std::uint64_t s_env = command_seed(master, SeedTag::kEnvelopeCheck);
  write_envelope_check(dir, run_envelope_check(graph, config.sample, config.envelope,
                                               config.iterations, s_env));
  record("envelope_check.json", "envelope-check", s_env);

  const std::uint64_t s_exec = command_seed(master, SeedTag::kExecSim);
  write_exec_sim(dir, run_exec_sim(graph, config, cost, s_exec));
  record("exec_sim.csv", "exec-sim", s_exec);
  record("data_parallel.csv", "exec-sim", s_exec);

  const std::uint64_t s_mem = command_seed(master, SeedTag::kMemoryCompare);
  write_memory_compare(dir, run_memory_compare(graph, config, s_mem));
  record("memory_compare.csv", "memory-compare", s_mem);

  Json manifest;
  manifest["master_seed"] = master;
  manifest["graph_seed"] = config.graph.spec
                               ? Json(command_seed(master, SeedTag::kGraph))
                               : Json(nullptr);
  manifest["iterations"] = config.iterations;
  manifest["files"] = std::move(files);
  open_out(dir / "manifest.json") << manifest.dump(2) << '\n';
}

}  // namespace gnnsim
