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

#include "memplan/regression.hpp"

#include <algorithm>
#include <stdexcept>

namespace memplan {

LinearModel fit(std::span<const std::pair<double, double>> points) {
  if (points.empty()) throw std::invalid_argument("fit: empty point set");
  const auto n = static_cast<double>(points.size());

  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& [x, y] : points) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= n;
  mean_y /= n;

  // Centered sums for numerical stability with byte-scale x values.
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
  }

  LinearModel model;
  model.n_train = points.size();
  if (points.size() < 2 || sxx == 0.0) {
    model.slope = 0.0;
    model.intercept = mean_y;
  } else {
    model.slope = sxy / sxx;
    model.intercept = mean_y - model.slope * mean_x;
  }
  return model;
}

double predict(const LinearModel& model, double x, double floor) {
  return std::max(model.slope * x + model.intercept, floor);
}

}  // namespace memplan
