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

#include "memplan/trace.hpp"

#include <doctest.h>

#include <sstream>

#include "memplan/errors.hpp"
#include "memplan/rng.hpp"
#include "support/helpers.hpp"

using namespace memplan;
using namespace memplan::testing;

namespace {

TraceSet load_from_string(const std::string& text) {
  std::istringstream in(text);
  return load_traces(in, "<test>");
}

}  // namespace

TEST_CASE("minimal well-formed file loads") {
  auto set = load_from_string(
      R"({"workflow":"wf","task":"bwa","execution_id":"e1","input_size_bytes":1000,)"
      R"("samples":[[0,5000000000],[1,6000000000]]})"
      "\n");
  REQUIRE(set.executions.size() == 1);
  const auto& t = set.executions[0];
  CHECK(t.workflow == "wf");
  CHECK(t.task == "bwa");
  CHECK(t.input_size == 1000);
  REQUIRE(t.samples.size() == 2);
  CHECK(t.samples[1].mem == 6000000000LL);
  CHECK(t.sample_period == doctest::Approx(1.0));
}

TEST_CASE("unknown fields are ignored") {
  auto set = load_from_string(
      R"({"workflow":"wf","task":"t","execution_id":"e1","input_size_bytes":1,)"
      R"("samples":[[0,1]],"hostname":"node7","exit_code":0})"
      "\n");
  CHECK(set.executions.size() == 1);
}

TEST_CASE("non-monotone timestamps are a validation error") {
  CHECK_THROWS_AS(load_from_string(R"({"workflow":"w","task":"t","execution_id":"e1",)"
                                   R"("input_size_bytes":1,"samples":[[0,1],[0,2]]})"
                                   "\n"),
                  ValidationError);
}

TEST_CASE("duplicate execution_id within a task is an error") {
  std::string rec =
      R"({"workflow":"w","task":"t","execution_id":"e1","input_size_bytes":1,"samples":[[0,1]]})";
  CHECK_THROWS_AS(load_from_string(rec + "\n" + rec + "\n"), ValidationError);
  // same id under a different task is fine
  std::string other =
      R"({"workflow":"w","task":"u","execution_id":"e1","input_size_bytes":1,"samples":[[0,1]]})";
  CHECK_NOTHROW(load_from_string(rec + "\n" + other + "\n"));
}

TEST_CASE("first timestamp must be zero") {
  CHECK_THROWS_AS(load_from_string(R"({"workflow":"w","task":"t","execution_id":"e1",)"
                                   R"("input_size_bytes":1,"samples":[[1,1],[2,2]]})"
                                   "\n"),
                  ValidationError);
}

TEST_CASE("negative values are rejected") {
  CHECK_THROWS_AS(load_from_string(R"({"workflow":"w","task":"t","execution_id":"e1",)"
                                   R"("input_size_bytes":-1,"samples":[[0,1]]})"
                                   "\n"),
                  ValidationError);
  CHECK_THROWS_AS(load_from_string(R"({"workflow":"w","task":"t","execution_id":"e1",)"
                                   R"("input_size_bytes":1,"samples":[[0,-5]]})"
                                   "\n"),
                  ValidationError);
}

TEST_CASE("parse errors carry the line number") {
  std::string good =
      R"({"workflow":"w","task":"t","execution_id":"e1","input_size_bytes":1,"samples":[[0,1]]})";
  try {
    load_from_string(good + "\nnot json\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("missing fields carry the line number") {
  try {
    load_from_string(R"({"workflow":"w","task":"t"})"
                     "\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    CHECK(std::string(e.what()).find("execution_id") != std::string::npos);
  }
}

TEST_CASE("duration covers the last sample's interval") {
  CHECK(duration(make_trace({1, 2, 3}, 1.0)) == doctest::Approx(3.0));
  CHECK(duration(make_trace({9}, 1.0)) == doctest::Approx(1.0));
  CHECK(duration(make_trace({1, 2, 3}, 2.0)) == doctest::Approx(6.0));
}

TEST_CASE("non-uniform traces resample onto the median period") {
  auto set = load_from_string(R"({"workflow":"w","task":"t","execution_id":"e1",)"
                              R"("input_size_bytes":1,"samples":[[0,10],[1,20],[3,30]]})"
                              "\n");
  const auto& t = set.executions[0];
  // diffs [1,2], median 1.5; grid 0,1.5,3 holds the previous value
  CHECK(t.sample_period == doctest::Approx(1.5));
  REQUIRE(t.samples.size() == 3);
  CHECK(t.samples[0].mem == 10);
  CHECK(t.samples[1].mem == 20);
  CHECK(t.samples[2].mem == 30);
  CHECK(t.samples[1].t == doctest::Approx(1.5));
  CHECK(duration(t) == doctest::Approx(4.5));
}

TEST_CASE("property: write then load round-trips exactly") {
  Rng rng(0xc0ffeeULL);
  TraceSet set;
  for (int e = 0; e < 20; ++e) {
    TaskExecutionTrace trace;
    trace.workflow = "wf";
    trace.task = "task" + std::to_string(e % 3);
    trace.execution_id = "e" + std::to_string(e);
    trace.input_size = static_cast<Bytes>(rng.next_index(1ULL << 40));
    // quarter-second periods keep i*period exact, so the derived median
    // period reproduces bit-for-bit
    double period = 0.25 * static_cast<double>(1 + rng.next_index(20));
    std::size_t n = 1 + rng.next_index(50);
    for (std::size_t i = 0; i < n; ++i) {
      trace.samples.push_back({static_cast<double>(i) * period,
                               static_cast<Bytes>(rng.next_index(1ULL << 45))});
    }
    trace.sample_period = period;
    set.executions.push_back(std::move(trace));
  }

  std::ostringstream out;
  write_traces(set, out);
  std::istringstream in(out.str());
  TraceSet loaded = load_traces(in, "<roundtrip>");
  REQUIRE(loaded.executions.size() == set.executions.size());
  CHECK(loaded == set);

  SUBCASE("every valid trace has strictly positive duration") {
    for (const auto& t : loaded.executions) CHECK(duration(t) > 0.0);
  }
}
