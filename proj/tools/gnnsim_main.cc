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

// gnnsim: sampling, envelope and orchestration-cost experiments.
//
//   gnnsim sample-stats   --config cfg.json [--seed S] [--out DIR] [--iterations N]
//   gnnsim envelope-check ...
//   gnnsim exec-sim       ...
//   gnnsim memory-compare ...
//   gnnsim sweep          ...
//   gnnsim calibrate      --config cfg.json --write calibration/default.json

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gnnsim/error.h"
#include "gnnsim/experiment.h"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::uint64_t> iterations;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Override master_seed");
  cmd->add_option("--out", flags.out, "Output directory");
  cmd->add_option("--iterations", flags.iterations, "Override iteration count");
}

gnnsim::ExperimentConfig load(const CommonFlags& flags) {
  gnnsim::ExperimentConfig c = gnnsim::load_experiment_config(flags.config);
  if (flags.seed) c.master_seed = *flags.seed;
  if (flags.out) c.output = *flags.out;
  if (flags.iterations) c.iterations = *flags.iterations;
  c.validate();
  return c;
}

void report(const std::filesystem::path& dir, const char* what) {
  std::cout << what << " -> " << dir.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gnnsim;
  CLI::App app{"Sampling-pipeline envelope and orchestration-cost simulator"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* stats = app.add_subcommand("sample-stats", "Per-iteration sampled sizes and histogram");
  auto* env = app.add_subcommand("envelope-check", "Envelope coverage and spread vs. Monte-Carlo");
  auto* exec = app.add_subcommand("exec-sim", "Strategy x batch execution-time simulation");
  auto* mem = app.add_subcommand("memory-compare", "MaxSG / Exact / Envelope memory plans");
  auto* sweep = app.add_subcommand("sweep", "Run every command and write a manifest");
  auto* calib = app.add_subcommand("calibrate", "Fit device cost coefficients");
  for (CLI::App* cmd : {stats, env, exec, mem, sweep, calib}) add_common(cmd, flags);

  double target = 0.45;
  double early_exit_share = 0.004;
  std::string write_path;
  std::string notes;
  calib->add_option("--target", target, "HostMediated GPU execution fraction")
      ->capture_default_str();
  calib->add_option("--early-exit-share", early_exit_share,
                    "Early-exit block cost as a share of per-block work")
      ->capture_default_str();
  calib->add_option("--write", write_path, "Write the calibrated model here");
  calib->add_option("--notes", notes, "Provenance text stored in the model");

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig c = load(flags);
    const std::uint64_t master = c.master_seed;
    if (*stats) {
      const CsrGraph g = load_graph(c.graph, master);
      write_sample_stats(c.output, run_sample_stats(g, c.sample, c.iterations,
                                                    command_seed(master, SeedTag::kSampleStats)));
      report(c.output, "sample-stats");
    } else if (*env) {
      const CsrGraph g = load_graph(c.graph, master);
      const EnvelopeCheckResult r =
          run_envelope_check(g, c.sample, c.envelope, c.iterations,
                             command_seed(master, SeedTag::kEnvelopeCheck));
      write_envelope_check(c.output, r);
      std::cout << "coverage " << r.coverage << " (threshold " << r.coverage_threshold
                << ") " << (r.coverage_pass ? "pass" : "FAIL") << '\n';
      report(c.output, "envelope-check");
    } else if (*exec) {
      const CsrGraph g = load_graph(c.graph, master);
      write_exec_sim(c.output, run_exec_sim(g, c, resolve_cost_model(c),
                                            command_seed(master, SeedTag::kExecSim)));
      report(c.output, "exec-sim");
    } else if (*mem) {
      const CsrGraph g = load_graph(c.graph, master);
      write_memory_compare(c.output, run_memory_compare(
                                         g, c, command_seed(master, SeedTag::kMemoryCompare)));
      report(c.output, "memory-compare");
    } else if (*sweep) {
      run_sweep(c, c.output);
      report(c.output, "sweep");
    } else if (*calib) {
      const CsrGraph g = load_graph(c.graph, master);
      const CostModel fitted =
          calibrate_cost_model(g, c, resolve_cost_model(c), target, early_exit_share,
                               command_seed(master, SeedTag::kExecSim));
      const std::string text = cost_model_to_json(fitted, notes);
      if (write_path.empty()) {
        std::cout << text << '\n';
      } else {
        std::ofstream(write_path) << text << '\n';
        std::cout << "calibrated model -> " << write_path << '\n';
      }
    }
  } catch (const Error& e) {
    std::cerr << "gnnsim: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "gnnsim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
