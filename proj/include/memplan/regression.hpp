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

#ifndef MEMPLAN_REGRESSION_HPP
#define MEMPLAN_REGRESSION_HPP

#include <cstddef>
#include <span>
#include <utility>

namespace memplan {

// Simple least-squares line y = slope*x + intercept. A single point or zero
// x-variance degenerates to the constant model at mean(y).
struct LinearModel {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t n_train = 0;
};

LinearModel fit(std::span<const std::pair<double, double>> points);

// max(slope*x + intercept, floor). Negative extrapolations below the floor
// would otherwise produce nonsense allocations.
double predict(const LinearModel& model, double x, double floor);

}  // namespace memplan

#endif  // MEMPLAN_REGRESSION_HPP
