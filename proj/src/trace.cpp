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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include <json.hpp>

#include "memplan/errors.hpp"

namespace memplan {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Seconds median_diff(const std::vector<MemorySample>& samples) {
  if (samples.size() < 2) return 1.0;
  std::vector<Seconds> diffs;
  diffs.reserve(samples.size() - 1);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    diffs.push_back(samples[i].t - samples[i - 1].t);
  }
  std::sort(diffs.begin(), diffs.end());
  std::size_t n = diffs.size();
  if (n % 2 == 1) return diffs[n / 2];
  return 0.5 * (diffs[n / 2 - 1] + diffs[n / 2]);
}

bool is_uniform(const std::vector<MemorySample>& samples, Seconds period) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double expected = static_cast<double>(i) * period;
    if (std::abs(samples[i].t - expected) > 1e-9 * std::max(1.0, expected)) return false;
  }
  return true;
}

// Previous-value hold onto the uniform grid {0, p, 2p, ...} up to the last
// original timestamp.
std::vector<MemorySample> resample(const std::vector<MemorySample>& samples, Seconds period) {
  Seconds last = samples.back().t;
  auto count = static_cast<std::size_t>(std::floor(last / period + 1e-9)) + 1;
  std::vector<MemorySample> out;
  out.reserve(count);
  std::size_t src = 0;
  for (std::size_t i = 0; i < count; ++i) {
    Seconds t = static_cast<double>(i) * period;
    while (src + 1 < samples.size() && samples[src + 1].t <= t + 1e-9 * std::max(1.0, t)) {
      ++src;
    }
    out.push_back({t, samples[src].mem});
  }
  return out;
}

void validate_and_normalize(TaskExecutionTrace& trace) {
  const std::string& id = trace.execution_id;
  if (trace.samples.empty()) {
    throw ValidationError("execution '" + id + "': field 'samples' must be non-empty");
  }
  if (trace.input_size < 0) {
    throw ValidationError("execution '" + id + "': field 'input_size_bytes' must be >= 0");
  }
  if (trace.samples.front().t != 0.0) {
    throw ValidationError("execution '" + id + "': field 'samples' must start at t=0");
  }
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const auto& s = trace.samples[i];
    if (s.t < 0.0) {
      throw ValidationError("execution '" + id + "': field 'samples' has negative timestamp");
    }
    if (s.mem < 0) {
      throw ValidationError("execution '" + id + "': field 'samples' has negative memory");
    }
    if (i > 0 && s.t <= trace.samples[i - 1].t) {
      throw ValidationError("execution '" + id +
                            "': field 'samples' timestamps must be strictly increasing");
    }
  }
  trace.sample_period = median_diff(trace.samples);
  if (!is_uniform(trace.samples, trace.sample_period)) {
    trace.samples = resample(trace.samples, trace.sample_period);
  }
}

TaskExecutionTrace parse_record(const json& rec, std::size_t line_no) {
  auto require = [&](const char* field) -> const json& {
    auto it = rec.find(field);
    if (it == rec.end()) {
      throw ParseError("line " + std::to_string(line_no) + ": missing field '" + field + "'");
    }
    return *it;
  };
  TaskExecutionTrace trace;
  try {
    trace.workflow = require("workflow").get<std::string>();
    trace.task = require("task").get<std::string>();
    trace.execution_id = require("execution_id").get<std::string>();
    trace.input_size = require("input_size_bytes").get<Bytes>();
    for (const auto& pair : require("samples")) {
      if (!pair.is_array() || pair.size() != 2) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": each sample must be a [t_seconds, mem_bytes] pair");
      }
      trace.samples.push_back({pair[0].get<Seconds>(), pair[1].get<Bytes>()});
    }
  } catch (const json::exception& e) {
    throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
  }
  return trace;
}

}  // namespace

Seconds duration(const TaskExecutionTrace& trace) {
  return trace.samples.back().t + trace.sample_period;
}

Bytes peak_memory(const TaskExecutionTrace& trace) {
  Bytes peak = 0;
  for (const auto& s : trace.samples) peak = std::max(peak, s.mem);
  return peak;
}

TraceSet load_traces(std::istream& in, const std::string& origin) {
  TraceSet set;
  std::set<std::pair<std::string, std::string>> seen;  // (workflow/task, execution_id)
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(origin + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!rec.is_object()) {
      throw ParseError(origin + ": line " + std::to_string(line_no) + ": record must be an object");
    }
    TaskExecutionTrace trace = parse_record(rec, line_no);
    validate_and_normalize(trace);
    auto key = std::make_pair(trace.workflow + "/" + trace.task, trace.execution_id);
    if (!seen.insert(key).second) {
      throw ValidationError("execution '" + trace.execution_id + "': field 'execution_id' duplicated within task '" +
                            trace.task + "'");
    }
    set.executions.push_back(std::move(trace));
  }
  return set;
}

TraceSet load_traces(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trace file: " + path);
  return load_traces(in, path);
}

void write_traces(const TraceSet& set, std::ostream& out) {
  for (const auto& trace : set.executions) {
    ordered_json rec;
    rec["workflow"] = trace.workflow;
    rec["task"] = trace.task;
    rec["execution_id"] = trace.execution_id;
    rec["input_size_bytes"] = trace.input_size;
    auto samples = ordered_json::array();
    for (const auto& s : trace.samples) {
      samples.push_back(ordered_json::array({s.t, s.mem}));
    }
    rec["samples"] = std::move(samples);
    out << rec.dump() << '\n';
  }
}

void write_traces(const TraceSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  write_traces(set, out);
}

}  // namespace memplan
