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

#ifndef MEMPLAN_SYNTH_HPP
#define MEMPLAN_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "memplan/trace.hpp"
#include "memplan/units.hpp"

namespace memplan {

// One execution phase: duration and memory are affine in input size, each
// perturbed by one multiplicative noise draw per execution.
struct PhaseSpec {
  double duration_slope = 0.0;      // seconds per byte
  double duration_intercept = 0.0;  // seconds
  double mem_slope = 0.0;           // bytes per byte
  double mem_intercept = 0.0;       // bytes
  double noise_rel = 0.0;           // uniform in [1-noise_rel, 1+noise_rel]
};

struct TaskArchetype {
  std::string name;
  std::vector<PhaseSpec> phases;
  Seconds sample_period = 1.0;
};

// One execution per input size. Noise is drawn per (execution, phase) from
// a stream split on (seed, execution index, phase index), so each trace
// stays a clean step function and draws are order-independent.
TraceSet generate(const TaskArchetype& archetype, const std::vector<Bytes>& input_sizes,
                  std::uint64_t seed);

// Built-in archetypes: "flat", "two-phase", "ramp", "four-stage".
TaskArchetype builtin_archetype(const std::string& name, double noise_rel);
std::vector<std::string> builtin_archetype_names();

TaskArchetype archetype_from_json_file(const std::string& path);

}  // namespace memplan

#endif  // MEMPLAN_SYNTH_HPP
