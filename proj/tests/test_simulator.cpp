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

#include <doctest.h>

#include <vector>

#include "memplan/rng.hpp"
#include "support/helpers.hpp"

using namespace memplan;
using namespace memplan::testing;

namespace {

AllocationPlan plan_of(std::vector<AllocationStep> steps) {
  AllocationPlan plan;
  plan.steps = std::move(steps);
  return plan;
}

const RetryConfig kConfig{128e9, 0.20, 2.0};

// The invariant restated independently of the simulator's accumulation.
double recompute_wastage(const SimulationOutcome& outcome) {
  double failed_alloc = 0.0;
  double final_alloc = 0.0, final_used = 0.0;
  for (const auto& a : outcome.attempts) {
    if (a.failed) {
      failed_alloc += a.allocated_integral;
    } else {
      final_alloc = a.allocated_integral;
      final_used = a.used_integral;
    }
  }
  return failed_alloc + (final_alloc - final_used);
}

}  // namespace

TEST_CASE("successful replay integrates allocation and usage") {
  auto trace = make_trace({5 * GB, 6 * GB, 7 * GB});
  AttemptRecord rec = replay_once(trace, plan_of({{0.0, 10e9}}));
  CHECK(!rec.failed);
  CHECK(rec.allocated_integral == doctest::Approx(30.0));
  CHECK(rec.used_integral == doctest::Approx(18.0));
}

TEST_CASE("replay fails at the first sample above the limit") {
  auto trace = make_trace({4 * GB, 6 * GB});
  AttemptRecord rec = replay_once(trace, plan_of({{0.0, 5e9}}));
  CHECK(rec.failed);
  CHECK(rec.t_fail == doctest::Approx(1.0));
  CHECK(rec.allocated_integral == doctest::Approx(5.0));
  CHECK(rec.used_integral == 0.0);
}

TEST_CASE("allocation equal to usage survives") {
  auto trace = make_trace({4 * GB, 6 * GB});
  AttemptRecord rec = replay_once(trace, plan_of({{0.0, 4e9}, {1.0, 6e9}}));
  CHECK(!rec.failed);
  CHECK(rec.allocated_integral == doctest::Approx(rec.used_integral));
}

TEST_CASE("mid-interval plan steps integrate piecewise") {
  auto trace = make_trace({1 * GB, 1 * GB});           // duration 2 s
  AttemptRecord rec = replay_once(trace, plan_of({{0.0, 2e9}, {0.5, 3e9}}));
  CHECK(!rec.failed);
  CHECK(rec.allocated_integral == doctest::Approx(0.5 * 2.0 + 1.5 * 3.0));
}

TEST_CASE("fig-3 style scenario: late second segment, one rescale, success") {
  // phase 2 arrives at t=8 but the plan raises at t=10
  std::vector<Bytes> mem;
  for (int i = 0; i < 8; ++i) mem.push_back(5 * GB);
  for (int i = 0; i < 4; ++i) mem.push_back(10 * GB);
  auto trace = make_trace(mem);

  AllocationPlan late = plan_of({{0.0, 5.5e9}, {10.0, 11e9}});
  SimulationOutcome outcome =
      simulate_with_retries(trace, late, RetryPolicy::KsPlusRescale, kConfig);

  REQUIRE(outcome.succeeded);
  REQUIRE(outcome.attempts.size() == 2);
  CHECK(outcome.attempts[0].failed);
  CHECK(outcome.attempts[0].t_fail == doctest::Approx(8.0));
  CHECK(outcome.failed_attempts() == 1);

  // the rescale moved the boundary to the failure time without touching limits
  const AllocationPlan& second = outcome.attempts[1].plan;
  REQUIRE(second.steps.size() == 2);
  CHECK(second.steps[1].start == doctest::Approx(8.0));
  CHECK(second.steps[0].limit == doctest::Approx(5.5e9));
  CHECK(second.steps[1].limit == doctest::Approx(11e9));

  // attempt 1 is charged its allocation up to the kill
  CHECK(outcome.attempts[0].allocated_integral == doctest::Approx(5.5 * 8.0));
  CHECK(outcome.total_wastage == doctest::Approx(recompute_wastage(outcome)));
}

TEST_CASE("a margined plan covering the trace succeeds in one attempt") {
  // two-phase trace with the boundary at 8 s; limits and start carry the
  // default 10%/15% margins of an exact fit
  std::vector<Bytes> mem;
  for (int i = 0; i < 8; ++i) mem.push_back(static_cast<Bytes>(5.1e9));
  for (int i = 0; i < 2; ++i) mem.push_back(static_cast<Bytes>(10.7e9));
  auto trace = make_trace(mem);
  AllocationPlan plan = plan_of({{0.0, 5.61e9}, {6.8, 11.77e9}});
  SimulationOutcome outcome =
      simulate_with_retries(trace, plan, RetryPolicy::KsPlusRescale, kConfig);
  REQUIRE(outcome.succeeded);
  CHECK(outcome.attempts.size() == 1);
}

TEST_CASE("plan capped at machine memory that still fails reports a hard error") {
  auto trace = make_trace({200 * GB});
  AllocationPlan plan = plan_of({{0.0, 300e9}});  // capped to 128 GB on submission
  SimulationOutcome outcome =
      simulate_with_retries(trace, plan, RetryPolicy::DoubleAll, kConfig);
  CHECK(!outcome.succeeded);
  CHECK(outcome.failure_reason == "exceeds machine memory");
  REQUIRE(outcome.attempts.size() == 1);
  CHECK(outcome.attempts[0].plan.steps[0].limit == doctest::Approx(128e9));
  CHECK(outcome.total_wastage == doctest::Approx(recompute_wastage(outcome)));
}

TEST_CASE("attempt budget exhaustion is reported") {
  auto trace = make_trace({100 * GB});
  AllocationPlan plan = plan_of({{0.0, 1e9}});
  SimulationOutcome outcome =
      simulate_with_retries(trace, plan, RetryPolicy::DoubleAll, kConfig, 3);
  CHECK(!outcome.succeeded);
  CHECK(outcome.failure_reason == "attempt budget exhausted");
  CHECK(outcome.attempts.size() == 3);
}

TEST_CASE("property: if the first limit covers the peak, exactly one attempt") {
  Rng rng(0x50f7ULL);
  for (int iter = 0; iter < 200; ++iter) {
    std::size_t n = 1 + rng.next_index(60);
    std::vector<Bytes> mem(n);
    Bytes peak = 0;
    for (auto& v : mem) {
      v = static_cast<Bytes>(rng.next_index(20ULL * GB));
      peak = std::max(peak, v);
    }
    auto trace = make_trace(mem);
    AllocationPlan plan = plan_of({{0.0, static_cast<double>(peak)}});
    SimulationOutcome outcome =
        simulate_with_retries(trace, plan, RetryPolicy::KsPlusRescale, kConfig);
    REQUIRE(outcome.succeeded);
    REQUIRE(outcome.attempts.size() == 1);
  }
}

TEST_CASE("property: grid-aligned integrals match closed-form sums") {
  Rng rng(0x16a1ULL);
  for (int iter = 0; iter < 300; ++iter) {
    double period = 0.25 * static_cast<double>(1 + rng.next_index(8));
    std::size_t n = 1 + rng.next_index(40);
    std::vector<Bytes> mem(n);
    for (auto& v : mem) v = static_cast<Bytes>(rng.next_index(10ULL * GB));
    auto trace = make_trace(mem, period);

    // plan steps on the same grid
    std::vector<AllocationStep> steps;
    double limit = rng.uniform(1e9, 12e9);
    steps.push_back({0.0, limit});
    for (std::size_t i = 1; i < n; ++i) {
      if (rng.next_double() < 0.2) {
        limit += rng.uniform(0.0, 3e9);
        steps.push_back({static_cast<double>(i) * period, limit});
      }
    }
    AllocationPlan plan = normalize_plan(steps);
    AttemptRecord rec = replay_once(trace, plan);

    // closed form: per-sample sums over the same grid
    double alloc = 0.0, used = 0.0;
    bool failed = false;
    double t_fail = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double t = static_cast<double>(i) * period;
      double a = limit_at(plan, t);
      if (static_cast<double>(mem[i]) > a) {
        failed = true;
        t_fail = t;
        break;
      }
      alloc += a * period;
      used += static_cast<double>(mem[i]) * period;
    }
    REQUIRE(rec.failed == failed);
    if (failed) {
      REQUIRE(rec.t_fail == doctest::Approx(t_fail));
      REQUIRE(close_rel(rec.allocated_integral, bytes_to_gb(alloc), 1e-9));
      REQUIRE(rec.used_integral == 0.0);
    } else {
      REQUIRE(close_rel(rec.allocated_integral, bytes_to_gb(alloc), 1e-9));
      REQUIRE(close_rel(rec.used_integral, bytes_to_gb(used), 1e-9));
    }
  }
}

TEST_CASE("property: total wastage matches the formula and stays non-negative") {
  Rng rng(0x3e7aULL);
  const std::vector<RetryPolicy> policies{RetryPolicy::KsPlusRescale, RetryPolicy::SelectiveOffset,
                                          RetryPolicy::PartialOffset, RetryPolicy::DoubleAll,
                                          RetryPolicy::MaxMachine};
  for (int iter = 0; iter < 1000; ++iter) {
    std::size_t n = 1 + rng.next_index(30);
    std::vector<Bytes> mem(n);
    for (auto& v : mem) v = static_cast<Bytes>(rng.next_index(30ULL * GB));
    auto trace = make_trace(mem, 0.5 + rng.next_double());

    std::vector<AllocationStep> steps;
    double limit = rng.uniform(5e8, 20e9);
    double start = 0.0;
    steps.push_back({0.0, limit});
    while (rng.next_double() < 0.5) {
      start += rng.uniform(0.5, 10.0);
      limit += rng.uniform(0.0, 8e9);
      steps.push_back({start, limit});
    }
    AllocationPlan plan = normalize_plan(steps);
    RetryPolicy policy = policies[rng.next_index(policies.size())];

    SimulationOutcome outcome = simulate_with_retries(trace, plan, policy, kConfig);
    REQUIRE(outcome.total_wastage >= 0.0);
    REQUIRE(close_rel(outcome.total_wastage, recompute_wastage(outcome), 1e-9));
    if (outcome.succeeded) {
      const auto& last = outcome.attempts.back();
      REQUIRE(last.allocated_integral >= last.used_integral - 1e-9);
    }
  }
}

TEST_CASE("property: retries terminate within the doubling/bump bound") {
  Rng rng(0xd00dULL);
  for (int iter = 0; iter < 200; ++iter) {
    std::size_t n = 1 + rng.next_index(30);
    std::vector<Bytes> mem(n);
    for (auto& v : mem) v = 1 + static_cast<Bytes>(rng.next_index(100ULL * GB));
    auto trace = make_trace(mem);

    std::vector<AllocationStep> steps;
    double limit = rng.uniform(1e9, 4e9);
    double start = 0.0;
    steps.push_back({0.0, limit});
    std::size_t extra = rng.next_index(4);
    for (std::size_t i = 0; i < extra; ++i) {
      start += rng.uniform(1.0, 10.0);
      limit += rng.uniform(1e8, 2e9);
      steps.push_back({start, limit});
    }
    AllocationPlan plan = normalize_plan(steps);
    RetryPolicy policy =
        std::vector<RetryPolicy>{RetryPolicy::KsPlusRescale, RetryPolicy::SelectiveOffset,
                                 RetryPolicy::PartialOffset, RetryPolicy::DoubleAll,
                                 RetryPolicy::MaxMachine}[rng.next_index(5)];

    // machine_max >= trace peak, so success must come within the bound:
    // k rescales plus log2 doublings plus log1.2 bumps
    double min_limit = plan.steps.front().limit;
    int bound = static_cast<int>(plan.steps.size()) +
                static_cast<int>(std::ceil(std::log2(kConfig.machine_max / min_limit))) +
                static_cast<int>(std::ceil(std::log(kConfig.machine_max / min_limit) /
                                           std::log(1.2))) +
                2;
    SimulationOutcome outcome = simulate_with_retries(trace, plan, policy, kConfig, bound);
    REQUIRE(outcome.succeeded);
    REQUIRE(static_cast<int>(outcome.attempts.size()) <= bound);
  }
}
