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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <vector>

#include "memplan/errors.hpp"
#include "memplan/regression.hpp"
#include "memplan/segmentation.hpp"
#include "support/helpers.hpp"

using namespace memplan;
using namespace memplan::testing;

namespace {

// Fig-1b-like shape used across the suite: 5.1 GB for 8 s, 10.7 GB for 2 s
// at every input size (slopes zero).
TaskArchetype bwa_like(double noise_rel) {
  TaskArchetype a;
  a.name = "bwa-like";
  a.sample_period = 1.0;
  a.phases = {{0.0, 8.0, 0.0, 5.1 * kBytesPerGb, noise_rel},
              {0.0, 2.0, 0.0, 10.7 * kBytesPerGb, noise_rel}};
  return a;
}

std::vector<Bytes> mem_of(const TaskExecutionTrace& trace) {
  std::vector<Bytes> mem;
  for (const auto& s : trace.samples) mem.push_back(s.mem);
  return mem;
}

}  // namespace

TEST_CASE("two-phase archetype reproduces the step shape") {
  TraceSet set = generate(bwa_like(0.0), {1 * GB}, 7);
  REQUIRE(set.executions.size() == 1);
  const auto& trace = set.executions[0];
  REQUIRE(trace.samples.size() == 10);

  Segmentation seg = get_segments(mem_of(trace), 2);
  CHECK(seg.sizes == std::vector<std::int64_t>{8, 2});
  CHECK(seg.peaks == std::vector<Bytes>{5'100'000'000, 10'700'000'000});
}

TEST_CASE("flat archetype with zero slope is constant") {
  TaskArchetype a;
  a.name = "flat";
  a.sample_period = 1.0;
  a.phases = {{0.0, 5.0, 0.0, 3.0 * kBytesPerGb, 0.0}};
  TraceSet set = generate(a, {123, 456}, 1);
  for (const auto& trace : set.executions) {
    for (const auto& s : trace.samples) {
      CHECK(s.mem == 3'000'000'000);
    }
  }
}

TEST_CASE("generation is deterministic under a fixed seed") {
  TraceSet a = generate(builtin_archetype("four-stage", 0.1), {1 * GB, 2 * GB, 3 * GB}, 42);
  TraceSet b = generate(builtin_archetype("four-stage", 0.1), {1 * GB, 2 * GB, 3 * GB}, 42);
  CHECK(a == b);
  TraceSet c = generate(builtin_archetype("four-stage", 0.1), {1 * GB, 2 * GB, 3 * GB}, 43);
  CHECK(a.executions != c.executions);
}

TEST_CASE("non-positive durations are rejected") {
  TaskArchetype a;
  a.name = "bad";
  a.sample_period = 1.0;
  a.phases = {{-1e-9, 1.0, 0.0, 1.0, 0.0}};  // duration goes negative at 2 GB
  CHECK_THROWS_AS(generate(a, {2 * GB}, 1), ConfigError);
}

TEST_CASE("empty inputs are rejected") {
  CHECK_THROWS_AS(generate(builtin_archetype("flat", 0.0), {}, 1), ConfigError);
}

TEST_CASE("property: zero-noise peaks are affine in input size") {
  // With zero noise a regression over the generated phase peaks must
  // recover the archetype's slope and intercept.
  TaskArchetype a = builtin_archetype("two-phase", 0.0);
  std::vector<Bytes> inputs;
  for (int i = 1; i <= 8; ++i) inputs.push_back(static_cast<Bytes>(i) * GB / 4);
  TraceSet set = generate(a, inputs, 9);

  for (std::size_t phase = 0; phase < a.phases.size(); ++phase) {
    std::vector<std::pair<double, double>> points;
    for (const auto& trace : set.executions) {
      Segmentation seg = get_segments(mem_of(trace), 2);
      points.emplace_back(static_cast<double>(trace.input_size),
                          static_cast<double>(seg.peaks[phase]));
    }
    LinearModel m = fit(points);
    REQUIRE(close_rel(m.slope, a.phases[phase].mem_slope, 1e-9));
    REQUIRE(close_rel(m.intercept, a.phases[phase].mem_intercept, 1e-9));
  }
}

TEST_CASE("archetypes load from JSON files") {
  auto dir = std::filesystem::temp_directory_path() / "memplan_synth_test";
  std::filesystem::create_directories(dir);
  auto path = (dir / "archetype.json").string();
  {
    std::ofstream out(path);
    out << R"({"name": "custom", "sample_period": 2.0,
               "phases": [{"duration_intercept": 6.0, "mem_intercept": 2e9},
                          {"duration_intercept": 4.0, "mem_intercept": 5e9,
                           "mem_slope": 1.5}]})";
  }
  TaskArchetype a = archetype_from_json_file(path);
  CHECK(a.name == "custom");
  CHECK(a.sample_period == 2.0);
  REQUIRE(a.phases.size() == 2);
  CHECK(a.phases[1].mem_slope == 1.5);
  CHECK(a.phases[0].noise_rel == 0.0);

  TraceSet set = generate(a, {2 * GB}, 1);
  REQUIRE(set.executions.size() == 1);
  CHECK(set.executions[0].samples.size() == 5);  // 10 s at 2 s period
  CHECK(set.executions[0].samples.back().mem == 8'000'000'000);  // 5e9 + 1.5 * 2e9

  CHECK_THROWS_AS(archetype_from_json_file((dir / "missing.json").string()), ParseError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("builtin archetypes generate and segment cleanly") {
  for (const auto& name : builtin_archetype_names()) {
    TraceSet set = generate(builtin_archetype(name, 0.0), {1 * GB, 2 * GB}, 5);
    CHECK(set.executions.size() == 2);
    for (const auto& trace : set.executions) {
      CHECK(!trace.samples.empty());
      CHECK(trace.samples.front().t == 0.0);
    }
  }
  CHECK_THROWS_AS(builtin_archetype("no-such", 0.0), ConfigError);
}
