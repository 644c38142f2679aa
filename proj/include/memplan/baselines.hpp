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

#ifndef MEMPLAN_BASELINES_HPP
#define MEMPLAN_BASELINES_HPP

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "memplan/plan.hpp"
#include "memplan/predictor.hpp"
#include "memplan/retry.hpp"
#include "memplan/trace.hpp"

namespace memplan {

enum class MethodKind {
  KsPlus,               // variable segments, retry ksplus-rescale
  KsUniformSelective,   // equal segments, retry selective-offset
  KsUniformPartial,     // equal segments, retry partial-offset
  TovarPpm,             // peak-probability first allocation, retry max-machine
  PpmImproved,          // peak-probability first allocation, retry double-all
  Default,              // developer-configured limit, retry double-all
};

struct MethodSpec {
  MethodKind kind = MethodKind::KsPlus;
  // Segment methods only. 0 means "sweep the experiment's k_values".
  int k = 0;
  // Default method only: task name -> limit in bytes.
  std::map<std::string, double> default_limits;
};

std::string to_string(MethodKind kind);
MethodKind method_kind_from_string(const std::string& name);
bool method_uses_segments(MethodKind kind);

// First allocation minimizing expected cost over the observed peaks under
// the slow-peaks assumption: a run whose peak fits costs its allocation c,
// a run that fails costs c plus the retry limit (machine_max, or
// min(2c, machine_max) for the improved variant). Candidates are the
// distinct observed peaks; ties go to the smaller allocation.
double fit_ppm(std::span<const Bytes> training_peaks, double machine_max, bool improved);

// Equal-duration segments: a runtime regression plus one peak regression
// per uniform window of the training samples.
struct UniformSegmentsModel {
  std::string task;
  int k = 1;
  LinearModel runtime_model;  // seconds vs input bytes
  std::vector<LinearModel> peak_models;
  std::vector<double> peak_floors;
  Margins margins;
};

UniformSegmentsModel fit_uniform_ksegments(std::span<const TaskExecutionTrace> training, int k,
                                           const Margins& margins);
AllocationPlan plan_uniform_ksegments(const UniformSegmentsModel& model, Bytes input_size);
// One-shot convenience over fit + plan.
AllocationPlan plan_uniform_ksegments(std::span<const TaskExecutionTrace> training, int k,
                                      Bytes input_size, const Margins& margins);

// Developer default: one flat step at the configured limit.
AllocationPlan plan_default(const std::string& task,
                            const std::map<std::string, double>& default_limits);

// A fitted method: produces a plan per input size and names its retry
// policy. The variant keeps fit results immutable and cheap to share.
class FittedMethod {
 public:
  FittedMethod(FittedTaskModel model, RetryPolicy retry)
      : model_(std::move(model)), retry_(retry) {}
  FittedMethod(UniformSegmentsModel model, RetryPolicy retry)
      : model_(std::move(model)), retry_(retry) {}
  FittedMethod(double constant_limit, RetryPolicy retry)
      : model_(constant_limit), retry_(retry) {}

  AllocationPlan plan_for(Bytes input_size) const;
  RetryPolicy retry_policy() const { return retry_; }

 private:
  std::variant<FittedTaskModel, UniformSegmentsModel, double> model_;
  RetryPolicy retry_;
};

FittedMethod fit_method(const MethodSpec& spec, int k,
                        std::span<const TaskExecutionTrace> training, const Margins& margins,
                        double machine_max);

}  // namespace memplan

#endif  // MEMPLAN_BASELINES_HPP
