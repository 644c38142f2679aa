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

#ifndef MEMPLAN_PREDICTOR_HPP
#define MEMPLAN_PREDICTOR_HPP

#include <span>
#include <string>
#include <vector>

#include "memplan/plan.hpp"
#include "memplan/regression.hpp"
#include "memplan/trace.hpp"

namespace memplan {

// Safety margins: peaks are overpredicted, segment start times
// underpredicted, since a late limit raise is the failure mode.
struct Margins {
  double peak = 0.10;
  double start = 0.15;
};

// Per-task model: for each of k segments, one regression for the segment's
// peak and one for its absolute start time, both against input size.
struct FittedTaskModel {
  std::string task;
  int k = 1;
  std::vector<LinearModel> peak_models;   // bytes vs input bytes
  std::vector<LinearModel> start_models;  // seconds vs input bytes; index 0 is identically 0
  std::vector<double> peak_floors;        // 0.5 * smallest training peak per segment
  Margins margins;
};

// Segments every training trace, converts segment sizes to absolute start
// times, and fits the per-index regressions. Traces that segment into fewer
// than k pieces repeat their final segment's values for the trailing
// indices so every index is defined for every trace.
FittedTaskModel fit_task(std::span<const TaskExecutionTrace> training, int k,
                         const Margins& margins);

// Margined, monotone plan for a new input size: peaks scaled by
// (1 + peak margin) with a running maximum, starts scaled by
// (1 - start margin) with non-advancing steps folded away.
AllocationPlan predict_plan(const FittedTaskModel& model, Bytes input_size);

std::string model_to_json(const FittedTaskModel& model);
FittedTaskModel model_from_json(const std::string& text);
FittedTaskModel load_model(const std::string& path);
void write_model(const FittedTaskModel& model, const std::string& path);

}  // namespace memplan

#endif  // MEMPLAN_PREDICTOR_HPP
