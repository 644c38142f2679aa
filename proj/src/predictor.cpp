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

#include "memplan/predictor.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "memplan/errors.hpp"
#include "memplan/segmentation.hpp"

namespace memplan {
namespace {

using ordered_json = nlohmann::ordered_json;

nlohmann::json linear_model_to_json(const LinearModel& m) {
  return {{"slope", m.slope}, {"intercept", m.intercept}, {"n_train", m.n_train}};
}

LinearModel linear_model_from_json(const nlohmann::json& j) {
  LinearModel m;
  m.slope = j.at("slope").get<double>();
  m.intercept = j.at("intercept").get<double>();
  m.n_train = j.at("n_train").get<std::size_t>();
  return m;
}

}  // namespace

FittedTaskModel fit_task(std::span<const TaskExecutionTrace> training, int k,
                         const Margins& margins) {
  if (training.empty()) throw std::invalid_argument("fit_task: empty training set");
  if (k < 1) throw std::invalid_argument("fit_task: k must be >= 1");
  if (margins.peak < 0.0 || margins.peak >= 1.0 || margins.start < 0.0 || margins.start >= 1.0) {
    throw std::invalid_argument("fit_task: margins must lie in [0, 1)");
  }
  for (const auto& trace : training) {
    if (trace.task != training.front().task) {
      throw std::invalid_argument("fit_task: mixed task names ('" + training.front().task +
                                  "' vs '" + trace.task + "')");
    }
  }

  const auto n = training.size();
  const auto ku = static_cast<std::size_t>(k);
  // points[i] = (input_size, peak or start) for segment index i
  std::vector<std::vector<std::pair<double, double>>> peak_points(ku), start_points(ku);
  for (auto& v : peak_points) v.reserve(n);
  for (auto& v : start_points) v.reserve(n);

  for (const auto& trace : training) {
    std::vector<Bytes> mem(trace.samples.size());
    for (std::size_t i = 0; i < trace.samples.size(); ++i) mem[i] = trace.samples[i].mem;
    Segmentation seg = get_segments(mem, k);

    std::vector<Seconds> starts(seg.segment_count());
    std::int64_t cum = 0;
    for (std::size_t i = 0; i < seg.segment_count(); ++i) {
      starts[i] = static_cast<double>(cum) * trace.sample_period;
      cum += seg.sizes[i];
    }

    const double x = static_cast<double>(trace.input_size);
    for (std::size_t i = 0; i < ku; ++i) {
      // Short traces repeat their last segment for trailing indices.
      std::size_t src = std::min(i, seg.segment_count() - 1);
      peak_points[i].emplace_back(x, static_cast<double>(seg.peaks[src]));
      start_points[i].emplace_back(x, starts[src]);
    }
  }

  FittedTaskModel model;
  model.task = training.front().task;
  model.k = k;
  model.margins = margins;
  model.peak_models.reserve(ku);
  model.start_models.reserve(ku);
  model.peak_floors.reserve(ku);
  for (std::size_t i = 0; i < ku; ++i) {
    model.peak_models.push_back(fit(peak_points[i]));
    model.start_models.push_back(fit(start_points[i]));
    double min_peak = peak_points[i].front().second;
    for (const auto& [x, y] : peak_points[i]) min_peak = std::min(min_peak, y);
    model.peak_floors.push_back(0.5 * min_peak);
  }
  return model;
}

AllocationPlan predict_plan(const FittedTaskModel& model, Bytes input_size) {
  const double x = static_cast<double>(input_size);
  std::vector<AllocationStep> raw;
  raw.reserve(model.peak_models.size());
  for (std::size_t i = 0; i < model.peak_models.size(); ++i) {
    double peak = predict(model.peak_models[i], x, model.peak_floors[i]) * (1.0 + model.margins.peak);
    double start = i == 0 ? 0.0 : predict(model.start_models[i], x, 0.0) * (1.0 - model.margins.start);
    raw.push_back({start, peak});
  }
  return normalize_plan(std::move(raw));
}

std::string model_to_json(const FittedTaskModel& model) {
  ordered_json doc;
  doc["task"] = model.task;
  doc["k"] = model.k;
  doc["peak_margin"] = model.margins.peak;
  doc["start_margin"] = model.margins.start;
  auto segments = ordered_json::array();
  for (std::size_t i = 0; i < model.peak_models.size(); ++i) {
    ordered_json seg;
    seg["peak"] = linear_model_to_json(model.peak_models[i]);
    seg["start"] = linear_model_to_json(model.start_models[i]);
    seg["peak_floor"] = model.peak_floors[i];
    segments.push_back(std::move(seg));
  }
  doc["segments"] = std::move(segments);
  return doc.dump(2);
}

FittedTaskModel model_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
  FittedTaskModel model;
  try {
    model.task = doc.at("task").get<std::string>();
    model.k = doc.at("k").get<int>();
    model.margins.peak = doc.at("peak_margin").get<double>();
    model.margins.start = doc.at("start_margin").get<double>();
    for (const auto& seg : doc.at("segments")) {
      model.peak_models.push_back(linear_model_from_json(seg.at("peak")));
      model.start_models.push_back(linear_model_from_json(seg.at("start")));
      model.peak_floors.push_back(seg.at("peak_floor").get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
  if (model.peak_models.empty() || model.peak_models.size() != static_cast<std::size_t>(model.k)) {
    throw ValidationError("model: segment count does not match k");
  }
  return model;
}

FittedTaskModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

void write_model(const FittedTaskModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << model_to_json(model) << '\n';
}

}  // namespace memplan
