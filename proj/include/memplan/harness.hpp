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

#ifndef MEMPLAN_HARNESS_HPP
#define MEMPLAN_HARNESS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "memplan/baselines.hpp"
#include "memplan/trace.hpp"

namespace memplan {

struct ExperimentConfig {
  std::string trace_path;
  std::vector<MethodSpec> methods;
  // Sweep applied to segment methods whose spec leaves k at 0.
  std::vector<int> k_values = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> train_fractions = {0.25, 0.5, 0.75};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double machine_max = 128.0 * kBytesPerGb;
  Margins margins;
  double bump = 0.20;
  double offset_factor = 2.0;
  int max_attempts = 20;
  std::string output_dir = "out";
  int jobs = 0;  // 0 = all available processors
  bool verbose = false;
};

// One (task, method, k, fraction, seed) cell: wastage summed over the test
// split, failures = OOM events across its simulations.
struct ResultRow {
  std::string workflow;
  std::string task;
  std::string method;
  int k = 0;  // 0 for non-segment methods
  double train_fraction = 0.0;
  std::uint64_t seed = 0;
  double total_wastage = 0.0;  // GB*s
  std::int64_t failures = 0;
  std::int64_t executions = 0;
};

// Deterministic train/test split of a task's execution indices. Membership
// depends only on (seed, workflow, task, fraction); the train share is
// round(fraction * n) clamped so both sides stay non-empty.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
SplitIndices split_task_executions(std::size_t n, std::uint64_t seed,
                                   const std::string& workflow, const std::string& task,
                                   double fraction);

// Per-task seeded shuffle/split, fit on train only, simulate the test
// split. Rows come back sorted; the computation is deterministic for a
// fixed config regardless of the job count.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const TraceSet& traces);
// Convenience overload loading config.trace_path.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

enum class GroupKey { Workflow, Task, Method, K, Fraction };

// Aggregate over everything not in group_by: wastage and failures are
// summed within each (group, seed) and then averaged over seeds.
struct SummaryRow {
  std::string workflow;  // "" when not grouped
  std::string task;
  std::string method;
  int k = -1;                   // -1 when not grouped
  double train_fraction = -1.0;  // -1 when not grouped
  int n_seeds = 0;
  double mean_wastage = 0.0;
  double mean_failures = 0.0;
  double mean_executions = 0.0;
};

std::vector<SummaryRow> aggregate(std::span<const ResultRow> rows,
                                  const std::vector<GroupKey>& group_by);

// Percentage reduction of b relative to a: (1 - b/a) * 100.
double reduction_percent(double a, double b);

void write_results_csv(std::span<const ResultRow> rows, const std::string& path);
std::vector<ResultRow> read_results_csv(const std::string& path);
void write_summary_csv(std::span<const ResultRow> rows, const std::string& path);
void write_summary_md(std::span<const ResultRow> rows, const std::string& path);
// results.csv + summary.csv + summary.md under dir.
void write_reports(std::span<const ResultRow> rows, const std::string& dir);

ExperimentConfig config_from_json_file(const std::string& path);

}  // namespace memplan

#endif  // MEMPLAN_HARNESS_HPP
