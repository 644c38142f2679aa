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

#ifndef MEMPLAN_RETRY_HPP
#define MEMPLAN_RETRY_HPP

#include <cstddef>
#include <string>

#include "memplan/plan.hpp"
#include "memplan/units.hpp"

namespace memplan {

struct FailureEvent {
  Seconds t_fail = 0.0;             // runtime at the OOM kill
  std::size_t failed_step_index = 0;  // step active at t_fail
};

enum class RetryPolicy {
  // Pull all later step starts in by t_fail / next_start so the next limit
  // arrives exactly at the failure time; only a failure in the last step
  // raises that step's limit (by `bump`).
  KsPlusRescale,
  // Raise only the failed step's limit by `offset_factor`, then repair
  // monotonicity with a running maximum.
  SelectiveOffset,
  // Raise the failed step's limit and every later limit by `offset_factor`.
  PartialOffset,
  // Single step at offset_factor * the limit active at the failure.
  DoubleAll,
  // Single step at the machine's full memory.
  MaxMachine,
};

struct RetryConfig {
  double machine_max = 128.0 * kBytesPerGb;  // bytes
  double bump = 0.20;                        // last-segment increase for KsPlusRescale
  double offset_factor = 2.0;                // offset multiplier for the other policies
};

// Plan for the next attempt. Limits are capped at machine_max; throws
// RetryExhaustedError("exceeds machine memory") when the policy can no
// longer raise the limit that failed.
AllocationPlan adjust_plan(const AllocationPlan& plan, const FailureEvent& event,
                           RetryPolicy policy, const RetryConfig& config);

std::string to_string(RetryPolicy policy);
RetryPolicy retry_policy_from_string(const std::string& name);

}  // namespace memplan

#endif  // MEMPLAN_RETRY_HPP
