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

#ifndef MEMPLAN_TESTS_HELPERS_HPP
#define MEMPLAN_TESTS_HELPERS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "memplan/rng.hpp"
#include "memplan/trace.hpp"
#include "memplan/units.hpp"

namespace memplan::testing {

// Uniform trace from raw memory values, period 1 s unless stated.
inline TaskExecutionTrace make_trace(std::vector<Bytes> mem, Seconds period = 1.0,
                                     Bytes input_size = 0,
                                     const std::string& id = "e00000") {
  TaskExecutionTrace trace;
  trace.workflow = "test";
  trace.task = "task";
  trace.execution_id = id;
  trace.input_size = input_size;
  trace.sample_period = period;
  for (std::size_t i = 0; i < mem.size(); ++i) {
    trace.samples.push_back({static_cast<double>(i) * period, mem[i]});
  }
  return trace;
}

inline bool close_rel(double a, double b, double rel, double abs = 1e-12) {
  return std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b)));
}

inline constexpr Bytes GB = 1'000'000'000;

}  // namespace memplan::testing

#endif  // MEMPLAN_TESTS_HELPERS_HPP
