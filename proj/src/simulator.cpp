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

#include "memplan/simulator.hpp"

#include <algorithm>
#include <utility>

#include "memplan/errors.hpp"

namespace memplan {

AttemptRecord replay_once(const TaskExecutionTrace& trace, const AllocationPlan& plan) {
  AttemptRecord record;
  record.plan = plan;

  for (const auto& sample : trace.samples) {
    const double limit = limit_at(plan, sample.t);
    if (static_cast<double>(sample.mem) > limit * (1.0 + kReplaySlack)) {
      record.failed = true;
      record.t_fail = sample.t;
      break;
    }
  }

  if (record.failed) {
    record.allocated_integral = allocated_integral(plan, record.t_fail);
    record.used_integral = 0.0;  // killed work is discarded
  } else {
    record.allocated_integral = allocated_integral(plan, duration(trace));
    double used_bytes_s = 0.0;
    for (const auto& sample : trace.samples) {
      used_bytes_s += static_cast<double>(sample.mem) * trace.sample_period;
    }
    record.used_integral = bytes_to_gb(used_bytes_s);
  }
  return record;
}

SimulationOutcome simulate_with_retries(const TaskExecutionTrace& trace, AllocationPlan plan,
                                        RetryPolicy policy, const RetryConfig& config,
                                        int max_attempts) {
  if (max_attempts < 1) throw std::invalid_argument("simulate_with_retries: max_attempts < 1");

  // Submission caps requests at the machine's memory.
  for (auto& step : plan.steps) step.limit = std::min(step.limit, config.machine_max);
  plan = normalize_plan(std::move(plan.steps));

  SimulationOutcome outcome;
  outcome.execution_id = trace.execution_id;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    AttemptRecord record = replay_once(trace, plan);
    outcome.attempts.push_back(record);
    if (!record.failed) {
      outcome.succeeded = true;
      break;
    }
    FailureEvent event{record.t_fail, step_index_at(plan, record.t_fail)};
    try {
      plan = adjust_plan(plan, event, policy, config);
    } catch (const RetryExhaustedError& e) {
      outcome.failure_reason = e.what();
      break;
    }
  }
  if (!outcome.succeeded && outcome.failure_reason.empty()) {
    outcome.failure_reason = "attempt budget exhausted";
  }

  double wastage = 0.0;
  for (const auto& a : outcome.attempts) {
    wastage += a.failed ? a.allocated_integral : (a.allocated_integral - a.used_integral);
  }
  outcome.total_wastage = wastage;
  return outcome;
}

}  // namespace memplan
