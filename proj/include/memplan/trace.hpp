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

#ifndef MEMPLAN_TRACE_HPP
#define MEMPLAN_TRACE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "memplan/units.hpp"

namespace memplan {

// One monitoring sample. The value holds on [t, t_next); the last sample
// of a trace holds for one sample_period.
struct MemorySample {
  Seconds t = 0.0;
  Bytes mem = 0;

  friend bool operator==(const MemorySample&, const MemorySample&) = default;
};

// One recorded execution of a workflow task.
struct TaskExecutionTrace {
  std::string workflow;
  std::string task;
  std::string execution_id;
  Bytes input_size = 0;  // accumulated input file size
  std::vector<MemorySample> samples;
  // Derived at ingestion/generation: median of successive timestamp
  // differences (1.0 when there is a single sample). Samples are uniform
  // on this grid after ingestion.
  Seconds sample_period = 1.0;

  friend bool operator==(const TaskExecutionTrace&, const TaskExecutionTrace&) = default;
};

struct TraceSet {
  std::vector<TaskExecutionTrace> executions;

  friend bool operator==(const TraceSet&, const TraceSet&) = default;
};

// Covered runtime: last timestamp plus one sample_period.
Seconds duration(const TaskExecutionTrace& trace);

Bytes peak_memory(const TaskExecutionTrace& trace);

// Validates invariants (non-empty samples, strictly increasing timestamps
// starting at 0, non-negative values, unique execution ids per task),
// derives the sample period, and resamples non-uniform traces onto that
// period by previous-value hold.
TraceSet load_traces(const std::string& path);
TraceSet load_traces(std::istream& in, const std::string& origin);

void write_traces(const TraceSet& set, const std::string& path);
void write_traces(const TraceSet& set, std::ostream& out);

}  // namespace memplan

#endif  // MEMPLAN_TRACE_HPP
