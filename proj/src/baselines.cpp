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

#include "memplan/baselines.hpp"

#include <algorithm>
#include <stdexcept>

#include "memplan/errors.hpp"

namespace memplan {

std::string to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::KsPlus: return "ksplus";
    case MethodKind::KsUniformSelective: return "ks-uniform-selective";
    case MethodKind::KsUniformPartial: return "ks-uniform-partial";
    case MethodKind::TovarPpm: return "tovar-ppm";
    case MethodKind::PpmImproved: return "ppm-improved";
    case MethodKind::Default: return "default";
  }
  return "unknown";
}

MethodKind method_kind_from_string(const std::string& name) {
  if (name == "ksplus") return MethodKind::KsPlus;
  if (name == "ks-uniform-selective") return MethodKind::KsUniformSelective;
  if (name == "ks-uniform-partial") return MethodKind::KsUniformPartial;
  if (name == "tovar-ppm") return MethodKind::TovarPpm;
  if (name == "ppm-improved") return MethodKind::PpmImproved;
  if (name == "default") return MethodKind::Default;
  throw ConfigError("unknown method '" + name + "'");
}

bool method_uses_segments(MethodKind kind) {
  return kind == MethodKind::KsPlus || kind == MethodKind::KsUniformSelective ||
         kind == MethodKind::KsUniformPartial;
}

double fit_ppm(std::span<const Bytes> training_peaks, double machine_max, bool improved) {
  if (training_peaks.empty()) throw std::invalid_argument("fit_ppm: empty peak list");
  std::vector<Bytes> candidates(training_peaks.begin(), training_peaks.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const double n = static_cast<double>(training_peaks.size());
  double best_c = 0.0;
  double best_cost = 0.0;
  bool first = true;
  for (Bytes candidate : candidates) {
    const double c = static_cast<double>(candidate);
    const double retry_term = improved ? std::min(2.0 * c, machine_max) : machine_max;
    double cost = 0.0;
    for (Bytes peak : training_peaks) {
      cost += static_cast<double>(peak) <= c ? c : c + retry_term;
    }
    cost /= n;
    if (first || cost < best_cost) {  // ascending scan keeps the smaller c on ties
      best_c = c;
      best_cost = cost;
      first = false;
    }
  }
  return best_c;
}

UniformSegmentsModel fit_uniform_ksegments(std::span<const TaskExecutionTrace> training, int k,
                                           const Margins& margins) {
  if (training.empty()) throw std::invalid_argument("fit_uniform_ksegments: empty training set");
  if (k < 1) throw std::invalid_argument("fit_uniform_ksegments: k must be >= 1");
  if (margins.peak < 0.0 || margins.peak >= 1.0 || margins.start < 0.0 || margins.start >= 1.0) {
    throw std::invalid_argument("fit_uniform_ksegments: margins must lie in [0, 1)");
  }
  for (const auto& trace : training) {
    if (trace.task != training.front().task) {
      throw std::invalid_argument("fit_uniform_ksegments: mixed task names");
    }
  }

  const auto ku = static_cast<std::size_t>(k);
  std::vector<std::pair<double, double>> runtime_points;
  runtime_points.reserve(training.size());
  std::vector<std::vector<std::pair<double, double>>> peak_points(ku);

  for (const auto& trace : training) {
    const double x = static_cast<double>(trace.input_size);
    runtime_points.emplace_back(x, duration(trace));
    const std::size_t n = trace.samples.size();
    for (std::size_t i = 0; i < ku; ++i) {
      std::size_t lo = i * n / ku;
      std::size_t hi = (i + 1) * n / ku;
      if (hi <= lo) {  // more windows than samples
        lo = std::min(lo, n - 1);
        hi = lo + 1;
      }
      Bytes window_max = trace.samples[lo].mem;
      for (std::size_t j = lo + 1; j < hi; ++j) {
        window_max = std::max(window_max, trace.samples[j].mem);
      }
      peak_points[i].emplace_back(x, static_cast<double>(window_max));
    }
  }

  UniformSegmentsModel model;
  model.task = training.front().task;
  model.k = k;
  model.margins = margins;
  model.runtime_model = fit(runtime_points);
  for (std::size_t i = 0; i < ku; ++i) {
    model.peak_models.push_back(fit(peak_points[i]));
    double min_peak = peak_points[i].front().second;
    for (const auto& [x, y] : peak_points[i]) min_peak = std::min(min_peak, y);
    model.peak_floors.push_back(0.5 * min_peak);
  }
  return model;
}

AllocationPlan plan_uniform_ksegments(const UniformSegmentsModel& model, Bytes input_size) {
  const double x = static_cast<double>(input_size);
  const double runtime =
      predict(model.runtime_model, x, 0.0) * (1.0 - model.margins.start);
  std::vector<AllocationStep> raw;
  raw.reserve(model.peak_models.size());
  for (std::size_t i = 0; i < model.peak_models.size(); ++i) {
    double peak =
        predict(model.peak_models[i], x, model.peak_floors[i]) * (1.0 + model.margins.peak);
    double start = runtime * static_cast<double>(i) / static_cast<double>(model.k);
    raw.push_back({start, peak});
  }
  return normalize_plan(std::move(raw));
}

AllocationPlan plan_uniform_ksegments(std::span<const TaskExecutionTrace> training, int k,
                                      Bytes input_size, const Margins& margins) {
  return plan_uniform_ksegments(fit_uniform_ksegments(training, k, margins), input_size);
}

AllocationPlan plan_default(const std::string& task,
                            const std::map<std::string, double>& default_limits) {
  auto it = default_limits.find(task);
  if (it == default_limits.end()) {
    throw ConfigError("no default limit configured for task '" + task + "'");
  }
  AllocationPlan plan;
  plan.steps.push_back({0.0, it->second});
  return plan;
}

AllocationPlan FittedMethod::plan_for(Bytes input_size) const {
  if (const auto* ks = std::get_if<FittedTaskModel>(&model_)) {
    return predict_plan(*ks, input_size);
  }
  if (const auto* uniform = std::get_if<UniformSegmentsModel>(&model_)) {
    return plan_uniform_ksegments(*uniform, input_size);
  }
  AllocationPlan plan;
  plan.steps.push_back({0.0, std::get<double>(model_)});
  return plan;
}

FittedMethod fit_method(const MethodSpec& spec, int k,
                        std::span<const TaskExecutionTrace> training, const Margins& margins,
                        double machine_max) {
  if (training.empty()) throw std::invalid_argument("fit_method: empty training set");
  switch (spec.kind) {
    case MethodKind::KsPlus:
      return {fit_task(training, k, margins), RetryPolicy::KsPlusRescale};
    case MethodKind::KsUniformSelective:
      return {fit_uniform_ksegments(training, k, margins), RetryPolicy::SelectiveOffset};
    case MethodKind::KsUniformPartial:
      return {fit_uniform_ksegments(training, k, margins), RetryPolicy::PartialOffset};
    case MethodKind::TovarPpm:
    case MethodKind::PpmImproved: {
      std::vector<Bytes> peaks;
      peaks.reserve(training.size());
      for (const auto& trace : training) peaks.push_back(peak_memory(trace));
      const bool improved = spec.kind == MethodKind::PpmImproved;
      return {fit_ppm(peaks, machine_max, improved),
              improved ? RetryPolicy::DoubleAll : RetryPolicy::MaxMachine};
    }
    case MethodKind::Default: {
      AllocationPlan plan = plan_default(training.front().task, spec.default_limits);
      return {plan.steps.front().limit, RetryPolicy::DoubleAll};
    }
  }
  throw ConfigError("fit_method: unhandled method kind");
}

}  // namespace memplan
