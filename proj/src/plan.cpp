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

#include "memplan/plan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memplan {

namespace {
inline Seconds time_slack(Seconds t) { return kReplaySlack * std::max(1.0, std::abs(t)); }
}  // namespace

AllocationPlan normalize_plan(std::vector<AllocationStep> raw) {
  if (raw.empty()) throw std::invalid_argument("normalize_plan: no steps");
  AllocationPlan plan;
  raw.front().start = 0.0;
  plan.steps.push_back(raw.front());
  for (std::size_t i = 1; i < raw.size(); ++i) {
    auto& prev = plan.steps.back();
    double limit = std::max(raw[i].limit, prev.limit);
    if (raw[i].start <= prev.start) {
      prev.limit = limit;  // collapsed start: fold into predecessor
    } else if (limit > prev.limit) {
      plan.steps.push_back({raw[i].start, limit});
    }
    // equal limit: redundant step, dropped
  }
  return plan;
}

std::size_t step_index_at(const AllocationPlan& plan, Seconds t) {
  std::size_t idx = 0;
  for (std::size_t i = 1; i < plan.steps.size(); ++i) {
    if (plan.steps[i].start <= t + time_slack(t)) {
      idx = i;
    } else {
      break;
    }
  }
  return idx;
}

double limit_at(const AllocationPlan& plan, Seconds t) {
  return plan.steps[step_index_at(plan, t)].limit;
}

double allocated_integral(const AllocationPlan& plan, Seconds end) {
  double byte_seconds = 0.0;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    Seconds lo = plan.steps[i].start;
    Seconds hi = (i + 1 < plan.steps.size()) ? std::min(plan.steps[i + 1].start, end) : end;
    if (hi <= lo) continue;
    byte_seconds += plan.steps[i].limit * (hi - lo);
  }
  return bytes_to_gb(byte_seconds);
}

bool plan_is_valid(const AllocationPlan& plan) {
  if (plan.steps.empty()) return false;
  if (plan.steps.front().start != 0.0) return false;
  for (std::size_t i = 1; i < plan.steps.size(); ++i) {
    if (plan.steps[i].start <= plan.steps[i - 1].start) return false;
    if (plan.steps[i].limit < plan.steps[i - 1].limit) return false;
  }
  return true;
}

}  // namespace memplan
