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

#include "memplan/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "memplan/errors.hpp"
#include "memplan/rng.hpp"
#include "memplan/simulator.hpp"

namespace memplan {
namespace {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find(',') != std::string::npos || s.find('\n') != std::string::npos) {
    throw ValidationError("CSV fields must not contain commas or newlines: '" + s + "'");
  }
  return s;
}

struct TaskGroup {
  std::string workflow;
  std::string task;
  std::vector<const TaskExecutionTrace*> executions;
};

struct WorkUnit {
  const TaskGroup* group = nullptr;
  const MethodSpec* spec = nullptr;
  int k = 0;  // 0 for non-segment methods
  double fraction = 0.0;
  std::uint64_t seed = 0;
  std::size_t row_index = 0;
};

ResultRow evaluate_unit(const WorkUnit& unit, const ExperimentConfig& config) {
  const TaskGroup& group = *unit.group;
  const std::size_t n = group.executions.size();
  SplitIndices split =
      split_task_executions(n, unit.seed, group.workflow, group.task, unit.fraction);

  std::vector<TaskExecutionTrace> train;
  train.reserve(split.train.size());
  for (std::size_t i : split.train) train.push_back(*group.executions[i]);

  FittedMethod fitted = fit_method(*unit.spec, std::max(unit.k, 1), train, config.margins,
                                   config.machine_max);
  RetryConfig retry{config.machine_max, config.bump, config.offset_factor};

  ResultRow row;
  row.workflow = group.workflow;
  row.task = group.task;
  row.method = to_string(unit.spec->kind);
  row.k = unit.k;
  row.train_fraction = unit.fraction;
  row.seed = unit.seed;
  row.executions = static_cast<std::int64_t>(split.test.size());
  for (std::size_t i : split.test) {
    const TaskExecutionTrace& trace = *group.executions[i];
    AllocationPlan plan = fitted.plan_for(trace.input_size);
    SimulationOutcome outcome = simulate_with_retries(trace, std::move(plan),
                                                      fitted.retry_policy(), retry,
                                                      config.max_attempts);
    row.total_wastage += outcome.total_wastage;
    row.failures += static_cast<std::int64_t>(outcome.failed_attempts());
  }
  return row;
}

}  // namespace

SplitIndices split_task_executions(std::size_t n, std::uint64_t seed,
                                   const std::string& workflow, const std::string& task,
                                   double fraction) {
  if (n < 2) throw std::invalid_argument("split_task_executions: need at least 2 executions");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  // Keyed on (seed, task identity) so adding a task or a method cannot
  // perturb another task's split.
  Rng rng = Rng::split(seed, fnv1a64(workflow + "/" + task));
  deterministic_shuffle(order, rng);

  const auto train_n = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))), 1, n - 1);
  SplitIndices split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_n));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(train_n), order.end());
  return split;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, const TraceSet& traces) {
  if (config.methods.empty()) throw ConfigError("experiment has no methods");
  if (config.seeds.empty()) throw ConfigError("experiment has no seeds");
  for (double f : config.train_fractions) {
    if (f <= 0.0 || f >= 1.0) throw ConfigError("train fractions must lie in (0, 1)");
  }

  std::vector<TaskGroup> groups;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const auto& trace : traces.executions) {
    auto key = std::make_pair(trace.workflow, trace.task);
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, groups.size());
      groups.push_back({trace.workflow, trace.task, {}});
      it = index.find(key);
    }
    groups[it->second].executions.push_back(&trace);
  }

  std::vector<WorkUnit> units;
  std::erase_if(groups, [](const TaskGroup& g) {
    if (g.executions.size() < 2) {
      std::cerr << "warning: skipping task " << g.workflow << "/" << g.task << " with "
                << g.executions.size() << " execution(s); cannot split\n";
      return true;
    }
    return false;
  });
  for (const auto& group : groups) {
    if (config.verbose) {
      std::cerr << "task " << group.workflow << "/" << group.task << ": "
                << group.executions.size() << " executions\n";
    }
    for (const auto& spec : config.methods) {
      std::vector<int> ks;
      if (!method_uses_segments(spec.kind)) {
        ks = {0};
      } else if (spec.k >= 1) {
        ks = {spec.k};
      } else {
        ks = config.k_values;
        if (ks.empty()) throw ConfigError("segment method without k and empty k_values");
      }
      for (int k : ks) {
        for (double fraction : config.train_fractions) {
          for (std::uint64_t seed : config.seeds) {
            units.push_back({&group, &spec, k, fraction, seed, units.size()});
          }
        }
      }
    }
  }

  std::vector<ResultRow> rows(units.size());
  unsigned jobs = config.jobs > 0 ? static_cast<unsigned>(config.jobs)
                                  : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, units.size() > 0 ? static_cast<unsigned>(units.size()) : 1u);

  if (jobs <= 1) {
    for (const auto& unit : units) rows[unit.row_index] = evaluate_unit(unit, config);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= units.size()) return;
        rows[units[i].row_index] = evaluate_unit(units[i], config);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.workflow, a.task, a.method, a.k, a.train_fraction, a.seed) <
           std::tie(b.workflow, b.task, b.method, b.k, b.train_fraction, b.seed);
  });
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  return run_experiment(config, load_traces(config.trace_path));
}

std::vector<SummaryRow> aggregate(std::span<const ResultRow> rows,
                                  const std::vector<GroupKey>& group_by) {
  if (rows.empty()) throw std::invalid_argument("aggregate: empty rows");
  auto has = [&](GroupKey key) {
    return std::find(group_by.begin(), group_by.end(), key) != group_by.end();
  };
  const bool by_workflow = has(GroupKey::Workflow);
  const bool by_task = has(GroupKey::Task);
  const bool by_method = has(GroupKey::Method);
  const bool by_k = has(GroupKey::K);
  const bool by_fraction = has(GroupKey::Fraction);

  using Key = std::tuple<std::string, std::string, std::string, int, double>;
  struct PerSeed {
    double wastage = 0.0;
    std::int64_t failures = 0;
    std::int64_t executions = 0;
  };
  std::map<Key, std::map<std::uint64_t, PerSeed>> cells;
  for (const auto& row : rows) {
    Key key{by_workflow ? row.workflow : "", by_task ? row.task : "",
            by_method ? row.method : "", by_k ? row.k : -1,
            by_fraction ? row.train_fraction : -1.0};
    PerSeed& cell = cells[key][row.seed];
    cell.wastage += row.total_wastage;
    cell.failures += row.failures;
    cell.executions += row.executions;
  }

  std::vector<SummaryRow> out;
  out.reserve(cells.size());
  for (const auto& [key, seeds] : cells) {
    SummaryRow s;
    std::tie(s.workflow, s.task, s.method, s.k, s.train_fraction) = key;
    s.n_seeds = static_cast<int>(seeds.size());
    for (const auto& [seed, cell] : seeds) {
      s.mean_wastage += cell.wastage;
      s.mean_failures += static_cast<double>(cell.failures);
      s.mean_executions += static_cast<double>(cell.executions);
    }
    s.mean_wastage /= s.n_seeds;
    s.mean_failures /= s.n_seeds;
    s.mean_executions /= s.n_seeds;
    out.push_back(std::move(s));
  }
  return out;
}

double reduction_percent(double a, double b) {
  if (a == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (1.0 - b / a) * 100.0;
}

void write_results_csv(std::span<const ResultRow> rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << "workflow,task,method,k,train_fraction,seed,total_wastage_gbs,failures,executions\n";
  for (const auto& row : rows) {
    out << csv_field(row.workflow) << ',' << csv_field(row.task) << ',' << csv_field(row.method)
        << ',' << row.k << ',' << format_double(row.train_fraction) << ',' << row.seed << ','
        << format_double(row.total_wastage) << ',' << row.failures << ',' << row.executions
        << '\n';
  }
}

std::vector<ResultRow> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open results file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  const std::string expected =
      "workflow,task,method,k,train_fraction,seed,total_wastage_gbs,failures,executions";
  if (line != expected) throw ParseError(path + ": unexpected header '" + line + "'");

  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9) {
      throw ParseError(path + ": line " + std::to_string(line_no) + ": expected 9 fields");
    }
    try {
      ResultRow row;
      row.workflow = fields[0];
      row.task = fields[1];
      row.method = fields[2];
      row.k = std::stoi(fields[3]);
      row.train_fraction = std::stod(fields[4]);
      row.seed = std::stoull(fields[5]);
      row.total_wastage = std::stod(fields[6]);
      row.failures = std::stoll(fields[7]);
      row.executions = std::stoll(fields[8]);
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      throw ParseError(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

void write_summary_csv(std::span<const ResultRow> rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << "workflow,task,method,k,train_fraction,n_seeds,mean_total_wastage_gbs,mean_failures,"
         "mean_executions\n";
  auto summary = aggregate(
      rows, {GroupKey::Workflow, GroupKey::Task, GroupKey::Method, GroupKey::K, GroupKey::Fraction});
  for (const auto& s : summary) {
    out << csv_field(s.workflow) << ',' << csv_field(s.task) << ',' << csv_field(s.method) << ','
        << s.k << ',' << format_double(s.train_fraction) << ',' << s.n_seeds << ','
        << format_double(s.mean_wastage) << ',' << format_double(s.mean_failures) << ','
        << format_double(s.mean_executions) << '\n';
  }
}

namespace {

std::string method_label(const std::string& method, int k) {
  if (k > 0) return method + " (k=" + std::to_string(k) + ")";
  return method;
}

std::string format_cell(double v) {
  if (std::isnan(v)) return "n/a";
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << v;
  return os.str();
}

}  // namespace

void write_summary_md(std::span<const ResultRow> rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);

  std::vector<double> fractions;
  for (const auto& row : rows) {
    if (std::find(fractions.begin(), fractions.end(), row.train_fraction) == fractions.end()) {
      fractions.push_back(row.train_fraction);
    }
  }
  std::sort(fractions.begin(), fractions.end());

  auto by_method = aggregate(rows, {GroupKey::Method, GroupKey::K, GroupKey::Fraction});
  std::vector<std::pair<std::string, int>> methods;
  for (const auto& s : by_method) {
    auto entry = std::make_pair(s.method, s.k);
    if (std::find(methods.begin(), methods.end(), entry) == methods.end()) {
      methods.push_back(entry);
    }
  }
  auto method_mean = [&](const std::string& method, int k, double fraction) {
    for (const auto& s : by_method) {
      if (s.method == method && s.k == k && s.train_fraction == fraction) return s.mean_wastage;
    }
    return std::numeric_limits<double>::quiet_NaN();
  };

  out << "# Experiment summary\n\n";
  out << "Wastage is reported in GB*s (1 GB = 10^9 bytes), averaged over seeds.\n\n";

  out << "## Aggregate wastage by method\n\n";
  out << "| method |";
  for (double f : fractions) out << " train " << format_double(f) << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < fractions.size(); ++i) out << "---|";
  out << "\n";
  for (const auto& [method, k] : methods) {
    out << "| " << method_label(method, k) << " |";
    for (double f : fractions) out << " " << format_cell(method_mean(method, k, f)) << " |";
    out << "\n";
  }
  out << "\n";

  // k sweep, when any segment method ran with several k values
  std::map<std::string, std::set<int>> ks_per_method;
  for (const auto& [method, k] : methods) {
    if (k > 0) ks_per_method[method].insert(k);
  }
  for (const auto& [method, ks] : ks_per_method) {
    if (ks.size() < 2) continue;
    out << "## Segment sweep: " << method << "\n\n";
    out << "| k |";
    for (double f : fractions) out << " train " << format_double(f) << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < fractions.size(); ++i) out << "---|";
    out << "\n";
    for (int k : ks) {
      out << "| " << k << " |";
      for (double f : fractions) out << " " << format_cell(method_mean(method, k, f)) << " |";
      out << "\n";
    }
    out << "\n";
  }

  // per-task breakdown
  auto by_task = aggregate(rows, {GroupKey::Workflow, GroupKey::Task, GroupKey::Method,
                                  GroupKey::K, GroupKey::Fraction});
  std::vector<std::pair<std::string, std::string>> tasks;
  for (const auto& s : by_task) {
    auto entry = std::make_pair(s.workflow, s.task);
    if (std::find(tasks.begin(), tasks.end(), entry) == tasks.end()) tasks.push_back(entry);
  }
  auto task_mean = [&](const std::pair<std::string, std::string>& task,
                       const std::pair<std::string, int>& method, double fraction) {
    for (const auto& s : by_task) {
      if (s.workflow == task.first && s.task == task.second && s.method == method.first &&
          s.k == method.second && s.train_fraction == fraction) {
        return s.mean_wastage;
      }
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  for (double f : fractions) {
    out << "## Per-task wastage, train fraction " << format_double(f) << "\n\n";
    out << "| task |";
    for (const auto& m : methods) out << " " << method_label(m.first, m.second) << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < methods.size(); ++i) out << "---|";
    out << "\n";
    for (const auto& task : tasks) {
      out << "| " << task.first << "/" << task.second << " |";
      for (const auto& m : methods) out << " " << format_cell(task_mean(task, m, f)) << " |";
      out << "\n";
    }
    out << "\n";
  }

  // pairwise reduction of row method vs column method
  for (double f : fractions) {
    out << "## Reduction matrix (row vs column, %), train fraction " << format_double(f)
        << "\n\n";
    out << "| |";
    for (const auto& m : methods) out << " " << method_label(m.first, m.second) << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < methods.size(); ++i) out << "---|";
    out << "\n";
    for (const auto& a : methods) {
      out << "| " << method_label(a.first, a.second) << " |";
      const double wa = method_mean(a.first, a.second, f);
      for (const auto& b : methods) {
        const double wb = method_mean(b.first, b.second, f);
        out << " " << format_cell(reduction_percent(wb, wa)) << " |";
      }
      out << "\n";
    }
    out << "\n";
  }
}

void write_reports(std::span<const ResultRow> rows, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_results_csv(rows, (std::filesystem::path(dir) / "results.csv").string());
  write_summary_csv(rows, (std::filesystem::path(dir) / "summary.csv").string());
  write_summary_md(rows, (std::filesystem::path(dir) / "summary.md").string());
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }

  ExperimentConfig config;
  try {
    config.trace_path = doc.value("traces", "");
    config.output_dir = doc.value("output_dir", "out");
    if (doc.contains("k_values")) config.k_values = doc["k_values"].get<std::vector<int>>();
    if (doc.contains("train_fractions")) {
      config.train_fractions = doc["train_fractions"].get<std::vector<double>>();
    }
    if (doc.contains("seeds")) config.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
    config.machine_max = doc.value("machine_max_gb", 128.0) * kBytesPerGb;
    config.margins.peak = doc.value("peak_margin", 0.10);
    config.margins.start = doc.value("start_margin", 0.15);
    config.bump = doc.value("bump", 0.20);
    config.offset_factor = doc.value("offset_factor", 2.0);
    config.max_attempts = doc.value("max_attempts", 20);
    config.jobs = doc.value("jobs", 0);

    if (!doc.contains("methods") || !doc["methods"].is_array() || doc["methods"].empty()) {
      throw ConfigError(path + ": config requires a non-empty 'methods' array");
    }
    for (const auto& entry : doc["methods"]) {
      MethodSpec spec;
      spec.kind = method_kind_from_string(entry.at("name").get<std::string>());
      spec.k = entry.value("k", 0);
      if (spec.kind == MethodKind::Default) {
        nlohmann::json limits;
        if (entry.contains("default_limits_file")) {
          std::ifstream lf(entry["default_limits_file"].get<std::string>());
          if (!lf) {
            throw ParseError("cannot open default limits file: " +
                             entry["default_limits_file"].get<std::string>());
          }
          lf >> limits;
        } else if (entry.contains("default_limits")) {
          limits = entry["default_limits"];
        } else {
          throw ConfigError(path + ": default method requires default_limits");
        }
        for (const auto& [task, gb] : limits.items()) {
          spec.default_limits[task] = gb.get<double>() * kBytesPerGb;
        }
      }
      config.methods.push_back(std::move(spec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return config;
}

}  // namespace memplan
