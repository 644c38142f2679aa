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

#ifndef MEMPLAN_SIMULATOR_HPP
#define MEMPLAN_SIMULATOR_HPP

#include <string>
#include <vector>

#include "memplan/plan.hpp"
#include "memplan/retry.hpp"
#include "memplan/trace.hpp"

namespace memplan {

struct AttemptRecord {
  AllocationPlan plan;
  bool failed = false;
  Seconds t_fail = 0.0;             // meaningful when failed
  double allocated_integral = 0.0;  // GB*s
  double used_integral = 0.0;       // GB*s; zero for failed attempts
};

struct SimulationOutcome {
  std::string execution_id;
  std::vector<AttemptRecord> attempts;
  double total_wastage = 0.0;  // GB*s
  bool succeeded = false;
  std::string failure_reason;  // set when !succeeded

  std::size_t failed_attempts() const {
    std::size_t n = 0;
    for (const auto& a : attempts) n += a.failed ? 1 : 0;
    return n;
  }
};

// One pass of the trace under the plan. OOM fires at the first sample time
// whose memory exceeds the active limit (equality survives). A failed
// attempt is charged the allocated integral up to the kill and zero used
// work.
AttemptRecord replay_once(const TaskExecutionTrace& trace, const AllocationPlan& plan);

// Replay / adjust loop until success, the retry hard error, or the attempt
// budget. The same trace is replayed on every attempt; the initial plan's
// limits are capped to machine memory on submission.
SimulationOutcome simulate_with_retries(const TaskExecutionTrace& trace, AllocationPlan plan,
                                        RetryPolicy policy, const RetryConfig& config,
                                        int max_attempts = 20);

}  // namespace memplan

#endif  // MEMPLAN_SIMULATOR_HPP
