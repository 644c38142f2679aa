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

#include "memplan/retry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "memplan/errors.hpp"

namespace memplan {
namespace {

void validate_event(const AllocationPlan& plan, const FailureEvent& event,
                    const RetryConfig& config) {
  if (plan.steps.empty()) throw std::invalid_argument("adjust_plan: empty plan");
  if (event.failed_step_index >= plan.steps.size()) {
    throw std::invalid_argument("adjust_plan: failed_step_index out of range");
  }
  const Seconds slack = kReplaySlack * std::max(1.0, std::abs(event.t_fail));
  if (plan.steps[event.failed_step_index].start > event.t_fail + slack) {
    throw std::invalid_argument("adjust_plan: failure time before the failed step's start");
  }
  if (event.failed_step_index + 1 < plan.steps.size() &&
      event.t_fail >= plan.steps[event.failed_step_index + 1].start) {
    throw std::invalid_argument("adjust_plan: failure time not within the failed step");
  }
  for (const auto& step : plan.steps) {
    if (step.limit > config.machine_max * (1.0 + kReplaySlack)) {
      throw std::invalid_argument("adjust_plan: plan limit exceeds machine memory");
    }
  }
}

// min(limit * factor, machine_max); hard error when that fails to raise it.
double raised_limit(double limit, double factor, double machine_max) {
  double raised = std::min(limit * factor, machine_max);
  if (raised <= limit) {
    throw RetryExhaustedError("exceeds machine memory");
  }
  return raised;
}

}  // namespace

AllocationPlan adjust_plan(const AllocationPlan& plan, const FailureEvent& event,
                           RetryPolicy policy, const RetryConfig& config) {
  validate_event(plan, event, config);
  const std::size_t idx = event.failed_step_index;
  std::vector<AllocationStep> raw = plan.steps;

  switch (policy) {
    case RetryPolicy::KsPlusRescale: {
      const bool has_successor = idx + 1 < raw.size();
      if (has_successor && event.t_fail > 0.0) {
        // The next limit should have been active when the OOM hit: compress
        // every later start by t_fail / s_next. Limits stay untouched.
        const double f = event.t_fail / raw[idx + 1].start;
        for (std::size_t j = idx + 1; j < raw.size(); ++j) raw[j].start *= f;
      } else {
        // Last segment (or a failure at t=0 where rescaling has no gap to
        // consume): raise the failed step's limit by the bump.
        raw[idx].limit = raised_limit(raw[idx].limit, 1.0 + config.bump, config.machine_max);
      }
      break;
    }
    case RetryPolicy::SelectiveOffset:
      raw[idx].limit = raised_limit(raw[idx].limit, config.offset_factor, config.machine_max);
      break;
    case RetryPolicy::PartialOffset: {
      raised_limit(raw[idx].limit, config.offset_factor, config.machine_max);  // progress check
      for (std::size_t j = idx; j < raw.size(); ++j) {
        raw[j].limit = std::min(raw[j].limit * config.offset_factor, config.machine_max);
      }
      break;
    }
    case RetryPolicy::DoubleAll: {
      double limit = raised_limit(raw[idx].limit, config.offset_factor, config.machine_max);
      raw = {{0.0, limit}};
      break;
    }
    case RetryPolicy::MaxMachine: {
      if (raw[idx].limit >= config.machine_max) {
        throw RetryExhaustedError("exceeds machine memory");
      }
      raw = {{0.0, config.machine_max}};
      break;
    }
  }
  return normalize_plan(std::move(raw));
}

std::string to_string(RetryPolicy policy) {
  switch (policy) {
    case RetryPolicy::KsPlusRescale: return "ksplus-rescale";
    case RetryPolicy::SelectiveOffset: return "selective-offset";
    case RetryPolicy::PartialOffset: return "partial-offset";
    case RetryPolicy::DoubleAll: return "double-all";
    case RetryPolicy::MaxMachine: return "max-machine";
  }
  return "unknown";
}

RetryPolicy retry_policy_from_string(const std::string& name) {
  if (name == "ksplus-rescale") return RetryPolicy::KsPlusRescale;
  if (name == "selective-offset") return RetryPolicy::SelectiveOffset;
  if (name == "partial-offset") return RetryPolicy::PartialOffset;
  if (name == "double-all") return RetryPolicy::DoubleAll;
  if (name == "max-machine") return RetryPolicy::MaxMachine;
  throw ConfigError("unknown retry policy '" + name + "'");
}

}  // namespace memplan
