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

#ifndef MEMPLAN_PLAN_HPP
#define MEMPLAN_PLAN_HPP

#include <cstddef>
#include <vector>

#include "memplan/units.hpp"

namespace memplan {

struct AllocationStep {
  Seconds start = 0.0;  // first step starts at 0
  double limit = 0.0;   // bytes; holds until the next step, last is open-ended

  friend bool operator==(const AllocationStep&, const AllocationStep&) = default;
};

// Monotone step function of memory limit over runtime: starts strictly
// increasing, limits strictly increasing after normalization.
struct AllocationPlan {
  std::vector<AllocationStep> steps;

  friend bool operator==(const AllocationPlan&, const AllocationPlan&) = default;
};

// Rebuilds a valid plan from raw (start, limit) pairs ordered by intent:
// limits take the running maximum, a step whose start does not strictly
// advance folds its limit into the previous step, and a step that does not
// raise the limit is dropped. First start is forced to 0.
AllocationPlan normalize_plan(std::vector<AllocationStep> raw);

// Index of the step active at time t. Step starts within a relative
// epsilon of t count as started, so sample times landing exactly on a
// predicted boundary read the new limit.
std::size_t step_index_at(const AllocationPlan& plan, Seconds t);

double limit_at(const AllocationPlan& plan, Seconds t);

// Integral of the plan's limit over [0, end) in GB*s.
double allocated_integral(const AllocationPlan& plan, Seconds end);

bool plan_is_valid(const AllocationPlan& plan);

}  // namespace memplan

#endif  // MEMPLAN_PLAN_HPP
