// Copyright 2026 The memplan Authors.
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
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "memplan/errors.hpp"
#include "memplan/harness.hpp"
#include "memplan/predictor.hpp"
#include "memplan/simulator.hpp"
#include "memplan/synth.hpp"

namespace {

using namespace memplan;

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    seeds.push_back(std::stoull(item));
  }
  if (seeds.empty()) throw ConfigError("--seeds: no seeds parsed from '" + csv + "'");
  return seeds;
}

std::map<std::string, double> load_default_limits(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open default limits file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  std::map<std::string, double> limits;
  for (const auto& [task, gb] : doc.items()) {
    limits[task] = gb.get<double>() * kBytesPerGb;
  }
  return limits;
}

int cmd_gen_synthetic(const std::string& archetype_name, const std::string& archetype_file,
                      int n, std::uint64_t seed, double noise_rel, double input_min_gb,
                      double input_max_gb, const std::string& out_path) {
  TaskArchetype archetype = archetype_file.empty()
                                ? builtin_archetype(archetype_name, noise_rel)
                                : archetype_from_json_file(archetype_file);
  std::vector<Bytes> inputs;
  inputs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double gb = n == 1 ? input_min_gb
                       : input_min_gb + (input_max_gb - input_min_gb) * i / (n - 1);
    inputs.push_back(std::llround(gb_to_bytes(gb)));
  }
  TraceSet set = generate(archetype, inputs, seed);
  write_traces(set, out_path);
  std::cerr << "wrote " << set.executions.size() << " executions to " << out_path << "\n";
  return 0;
}

int cmd_fit(const std::string& traces_path, std::string task, int k, double peak_margin,
            double start_margin, const std::string& out_path) {
  TraceSet set = load_traces(traces_path);
  if (task.empty()) {
    std::set<std::string> tasks;
    for (const auto& t : set.executions) tasks.insert(t.task);
    if (tasks.size() != 1) {
      std::string names;
      for (const auto& t : tasks) names += (names.empty() ? "" : ", ") + t;
      throw ValidationError("trace file contains " + std::to_string(tasks.size()) +
                            " tasks (" + names + "); pick one with --task");
    }
    task = *tasks.begin();
  }
  std::vector<TaskExecutionTrace> training;
  for (const auto& t : set.executions) {
    if (t.task == task) training.push_back(t);
  }
  if (training.empty()) throw ValidationError("no executions for task '" + task + "'");
  FittedTaskModel model = fit_task(training, k, Margins{peak_margin, start_margin});
  write_model(model, out_path);
  std::cerr << "fitted " << task << " (k=" << k << ") on " << training.size()
            << " executions -> " << out_path << "\n";
  return 0;
}

int cmd_simulate(const std::string& model_path, const std::string& traces_path,
                 const std::string& policy_name, double machine_max_gb, double bump,
                 double offset_factor, int max_attempts) {
  FittedTaskModel model = load_model(model_path);
  TraceSet set = load_traces(traces_path);
  RetryPolicy policy = retry_policy_from_string(policy_name);
  RetryConfig retry{gb_to_bytes(machine_max_gb), bump, offset_factor};

  auto outcomes = nlohmann::ordered_json::array();
  for (const auto& trace : set.executions) {
    if (trace.task != model.task) continue;
    AllocationPlan plan = predict_plan(model, trace.input_size);
    SimulationOutcome outcome =
        simulate_with_retries(trace, std::move(plan), policy, retry, max_attempts);
    nlohmann::ordered_json rec;
    rec["execution_id"] = outcome.execution_id;
    rec["succeeded"] = outcome.succeeded;
    if (!outcome.succeeded) rec["failure_reason"] = outcome.failure_reason;
    rec["attempts"] = outcome.attempts.size();
    rec["failures"] = outcome.failed_attempts();
    rec["total_wastage_gbs"] = outcome.total_wastage;
    auto attempts = nlohmann::ordered_json::array();
    for (const auto& a : outcome.attempts) {
      nlohmann::ordered_json ar;
      ar["failed"] = a.failed;
      if (a.failed) ar["t_fail"] = a.t_fail;
      ar["allocated_gbs"] = a.allocated_integral;
      ar["used_gbs"] = a.used_integral;
      attempts.push_back(std::move(ar));
    }
    rec["attempt_records"] = std::move(attempts);
    outcomes.push_back(std::move(rec));
  }
  if (outcomes.empty()) {
    throw ValidationError("no executions match the model's task '" + model.task + "'");
  }
  std::cout << outcomes.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workflow task memory prediction, trace-replay simulation, and wastage reporting"};
  app.require_subcommand(1);

  // gen-synthetic
  auto* gen = app.add_subcommand("gen-synthetic", "Generate a synthetic JSONL trace set");
  std::string gen_archetype = "two-phase";
  std::string gen_archetype_file;
  int gen_n = 50;
  std::uint64_t gen_seed = 1;
  double gen_noise = 0.0;
  double gen_min_gb = 0.25;
  double gen_max_gb = 13.0;
  std::string gen_out;
  gen->add_option("--archetype", gen_archetype, "Built-in archetype name")
      ->check(CLI::IsMember(builtin_archetype_names()));
  gen->add_option("--archetype-file", gen_archetype_file, "Archetype JSON file");
  gen->add_option("--n", gen_n, "Number of executions")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Noise seed");
  gen->add_option("--noise-rel", gen_noise, "Relative noise for built-in archetypes")
      ->check(CLI::Range(0.0, 0.9));
  gen->add_option("--input-min-gb", gen_min_gb, "Smallest input size (GB)");
  gen->add_option("--input-max-gb", gen_max_gb, "Largest input size (GB)");
  gen->add_option("--out", gen_out, "Output JSONL path")->required();

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit a per-task segment model");
  std::string fit_traces, fit_task_name, fit_out;
  int fit_k = 2;
  double fit_peak_margin = 0.10, fit_start_margin = 0.15;
  fit_cmd->add_option("--traces", fit_traces, "Input JSONL traces")->required();
  fit_cmd->add_option("--task", fit_task_name, "Task to fit (optional when unique)");
  fit_cmd->add_option("--k", fit_k, "Segment count")->check(CLI::PositiveNumber);
  fit_cmd->add_option("--peak-margin", fit_peak_margin, "Peak overprediction fraction");
  fit_cmd->add_option("--start-margin", fit_start_margin, "Start underprediction fraction");
  fit_cmd->add_option("--out", fit_out, "Output model JSON path")->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Replay a fitted model against traces");
  std::string sim_model, sim_traces, sim_policy = "ksplus-rescale";
  double sim_machine_gb = 128.0, sim_bump = 0.20, sim_offset = 2.0;
  int sim_attempts = 20;
  sim->add_option("--model", sim_model, "Fitted model JSON")->required();
  sim->add_option("--traces", sim_traces, "Input JSONL traces")->required();
  sim->add_option("--policy", sim_policy, "Retry policy")
      ->check(CLI::IsMember({"ksplus-rescale", "selective-offset", "partial-offset",
                             "double-all", "max-machine"}));
  sim->add_option("--machine-max-gb", sim_machine_gb, "Machine memory (GB)");
  sim->add_option("--bump", sim_bump, "Last-segment bump fraction");
  sim->add_option("--offset-factor", sim_offset, "Offset multiplier");
  sim->add_option("--max-attempts", sim_attempts, "Attempt budget")->check(CLI::PositiveNumber);

  // run-experiment
  auto* run = app.add_subcommand("run-experiment", "Run a full train/test experiment");
  std::string run_config;
  std::string run_traces, run_out, run_seeds, run_method, run_limits;
  std::vector<double> run_fracs;
  int run_jobs = -1, run_k = 0;
  double run_machine_gb = -1.0, run_peak = -1.0, run_start = -1.0, run_bump = -1.0;
  run->add_option("--config", run_config, "Experiment config JSON")->required();
  run->add_option("--traces", run_traces, "Override trace path");
  run->add_option("--out", run_out, "Override output directory");
  run->add_option("--seeds", run_seeds, "Override seeds (comma-separated)");
  run->add_option("--train-frac", run_fracs, "Override train fractions")->delimiter(',');
  run->add_option("--method", run_method, "Restrict to one method")
      ->check(CLI::IsMember({"ksplus", "ks-uniform-selective", "ks-uniform-partial",
                             "tovar-ppm", "ppm-improved", "default"}));
  run->add_option("--k", run_k, "Override segment count for segment methods");
  run->add_option("--default-limits", run_limits, "Override default limits JSON file");
  run->add_option("--jobs", run_jobs, "Worker threads (0 = all processors)");
  run->add_option("--machine-max-gb", run_machine_gb, "Machine memory (GB)");
  run->add_option("--peak-margin", run_peak, "Peak overprediction fraction");
  run->add_option("--start-margin", run_start, "Start underprediction fraction");
  run->add_option("--bump", run_bump, "Last-segment bump fraction");

  // report
  auto* report = app.add_subcommand("report", "Re-aggregate an existing results.csv");
  std::string report_results, report_out = ".";
  report->add_option("--results", report_results, "results.csv path")->required();
  report->add_option("--out", report_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      return cmd_gen_synthetic(gen_archetype, gen_archetype_file, gen_n, gen_seed, gen_noise,
                               gen_min_gb, gen_max_gb, gen_out);
    }
    if (fit_cmd->parsed()) {
      return cmd_fit(fit_traces, fit_task_name, fit_k, fit_peak_margin, fit_start_margin,
                     fit_out);
    }
    if (sim->parsed()) {
      return cmd_simulate(sim_model, sim_traces, sim_policy, sim_machine_gb, sim_bump,
                          sim_offset, sim_attempts);
    }
    if (run->parsed()) {
      ExperimentConfig config = config_from_json_file(run_config);
      if (!run_traces.empty()) config.trace_path = run_traces;
      if (!run_out.empty()) config.output_dir = run_out;
      if (!run_seeds.empty()) config.seeds = parse_seed_list(run_seeds);
      if (!run_fracs.empty()) config.train_fractions = run_fracs;
      if (run_jobs >= 0) config.jobs = run_jobs;
      if (run_machine_gb > 0) config.machine_max = gb_to_bytes(run_machine_gb);
      if (run_peak >= 0) config.margins.peak = run_peak;
      if (run_start >= 0) config.margins.start = run_start;
      if (run_bump >= 0) config.bump = run_bump;
      if (!run_method.empty()) {
        MethodKind kind = method_kind_from_string(run_method);
        std::erase_if(config.methods, [&](const MethodSpec& m) { return m.kind != kind; });
        if (config.methods.empty()) {
          throw ConfigError("config does not define method '" + run_method + "'");
        }
      }
      if (run_k > 0) {
        for (auto& m : config.methods) {
          if (method_uses_segments(m.kind)) m.k = run_k;
        }
      }
      if (!run_limits.empty()) {
        auto limits = load_default_limits(run_limits);
        bool applied = false;
        for (auto& m : config.methods) {
          if (m.kind == MethodKind::Default) {
            m.default_limits = limits;
            applied = true;
          }
        }
        if (!applied) throw ConfigError("--default-limits given but config has no default method");
      }
      if (config.trace_path.empty()) {
        throw ConfigError("no trace path: set 'traces' in the config or pass --traces");
      }
      config.verbose = true;
      auto rows = run_experiment(config);
      write_reports(rows, config.output_dir);
      std::cerr << "wrote " << rows.size() << " result rows to " << config.output_dir << "\n";
      return 0;
    }
    if (report->parsed()) {
      auto rows = read_results_csv(report_results);
      std::filesystem::create_directories(report_out);
      write_summary_csv(rows, (std::filesystem::path(report_out) / "summary.csv").string());
      write_summary_md(rows, (std::filesystem::path(report_out) / "summary.md").string());
      std::cerr << "re-aggregated " << rows.size() << " rows into " << report_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
