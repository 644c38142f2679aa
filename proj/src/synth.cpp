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

#include "memplan/synth.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "memplan/errors.hpp"
#include "memplan/rng.hpp"

namespace memplan {
namespace {

std::string execution_id_for(std::size_t index) {
  std::ostringstream os;
  os << 'e';
  std::string digits = std::to_string(index);
  for (std::size_t i = digits.size(); i < 5; ++i) os << '0';
  os << digits;
  return os.str();
}

}  // namespace

TraceSet generate(const TaskArchetype& archetype, const std::vector<Bytes>& input_sizes,
                  std::uint64_t seed) {
  if (archetype.phases.empty()) throw ConfigError("archetype '" + archetype.name + "' has no phases");
  if (input_sizes.empty()) throw ConfigError("generate: input_sizes must be non-empty");
  if (archetype.sample_period <= 0.0) {
    throw ConfigError("archetype '" + archetype.name + "' has non-positive sample_period");
  }

  TraceSet set;
  set.executions.reserve(input_sizes.size());
  for (std::size_t e = 0; e < input_sizes.size(); ++e) {
    const double input = static_cast<double>(input_sizes[e]);

    std::vector<Seconds> phase_dur(archetype.phases.size());
    std::vector<double> phase_mem(archetype.phases.size());
    for (std::size_t j = 0; j < archetype.phases.size(); ++j) {
      const PhaseSpec& p = archetype.phases[j];
      Rng rng = Rng::split(seed, e, j);
      const double lo = 1.0 - p.noise_rel;
      const double hi = 1.0 + p.noise_rel;
      const double mem_noise = p.noise_rel > 0.0 ? rng.uniform(lo, hi) : 1.0;
      const double dur_noise = p.noise_rel > 0.0 ? rng.uniform(lo, hi) : 1.0;
      phase_dur[j] = (p.duration_slope * input + p.duration_intercept) * dur_noise;
      phase_mem[j] = (p.mem_slope * input + p.mem_intercept) * mem_noise;
      if (phase_dur[j] <= 0.0) {
        throw ConfigError("archetype '" + archetype.name + "': phase " + std::to_string(j) +
                          " has non-positive duration at input size " +
                          std::to_string(input_sizes[e]));
      }
      if (phase_mem[j] < 0.0) {
        throw ConfigError("archetype '" + archetype.name + "': phase " + std::to_string(j) +
                          " has negative memory at input size " + std::to_string(input_sizes[e]));
      }
    }

    std::vector<Seconds> boundary(archetype.phases.size() + 1, 0.0);
    for (std::size_t j = 0; j < archetype.phases.size(); ++j) {
      boundary[j + 1] = boundary[j] + phase_dur[j];
    }
    const Seconds total = boundary.back();
    const auto n_samples =
        std::max<std::int64_t>(1, std::llround(total / archetype.sample_period));

    TaskExecutionTrace trace;
    trace.workflow = "synthetic";
    trace.task = archetype.name;
    trace.execution_id = execution_id_for(e);
    trace.input_size = input_sizes[e];
    trace.sample_period = archetype.sample_period;
    trace.samples.reserve(static_cast<std::size_t>(n_samples));

    std::size_t phase = 0;
    for (std::int64_t i = 0; i < n_samples; ++i) {
      const Seconds t = static_cast<double>(i) * archetype.sample_period;
      while (phase + 1 < archetype.phases.size() &&
             t >= boundary[phase + 1] - 1e-9 * std::max(1.0, t)) {
        ++phase;
      }
      trace.samples.push_back({t, std::max<Bytes>(0, std::llround(phase_mem[phase]))});
    }
    set.executions.push_back(std::move(trace));
  }
  return set;
}

TaskArchetype builtin_archetype(const std::string& name, double noise_rel) {
  auto phase = [noise_rel](double dur_slope, double dur_icpt, double mem_slope,
                           double mem_icpt) {
    return PhaseSpec{dur_slope, dur_icpt, mem_slope, mem_icpt, noise_rel};
  };
  TaskArchetype a;
  a.name = name;
  a.sample_period = 1.0;
  if (name == "flat") {
    a.phases = {phase(20e-9, 40.0, 2.0, 1.0 * kBytesPerGb)};
  } else if (name == "two-phase") {
    // Load-then-process shape: ~5.1 GB for 80% of the runtime, ~10.7 GB for
    // the final 20% at 1 GB input, boundary fixed at 80% for every input.
    a.phases = {phase(16e-9, 64.0, 1.0, 4.1 * kBytesPerGb),
                phase(4e-9, 16.0, 2.0, 8.7 * kBytesPerGb)};
  } else if (name == "ramp") {
    // Linear growth discretized into 8 equal-duration plateaus.
    for (int j = 1; j <= 8; ++j) {
      const double f = static_cast<double>(j) / 8.0;
      a.phases.push_back(phase(2e-9, 10.0, 1.5 * f, 4.0 * f * kBytesPerGb));
    }
  } else if (name == "four-stage") {
    // Pipeline of wrapped programs with a mid-run dip.
    a.phases = {phase(6e-9, 30.0, 0.5, 1.5 * kBytesPerGb),
                phase(4e-9, 20.0, 1.0, 5.0 * kBytesPerGb),
                phase(8e-9, 40.0, 0.75, 3.0 * kBytesPerGb),
                phase(2e-9, 10.0, 1.5, 9.0 * kBytesPerGb)};
  } else {
    throw ConfigError("unknown archetype '" + name + "'");
  }
  return a;
}

std::vector<std::string> builtin_archetype_names() {
  return {"flat", "two-phase", "ramp", "four-stage"};
}

TaskArchetype archetype_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open archetype file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  TaskArchetype a;
  try {
    a.name = doc.at("name").get<std::string>();
    a.sample_period = doc.value("sample_period", 1.0);
    for (const auto& p : doc.at("phases")) {
      PhaseSpec spec;
      spec.duration_slope = p.value("duration_slope", 0.0);
      spec.duration_intercept = p.value("duration_intercept", 0.0);
      spec.mem_slope = p.value("mem_slope", 0.0);
      spec.mem_intercept = p.value("mem_intercept", 0.0);
      spec.noise_rel = p.value("noise_rel", 0.0);
      a.phases.push_back(spec);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (a.phases.empty()) throw ConfigError("archetype '" + a.name + "' has no phases");
  return a;
}

}  // namespace memplan
