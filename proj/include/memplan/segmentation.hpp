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

#ifndef MEMPLAN_SEGMENTATION_HPP
#define MEMPLAN_SEGMENTATION_HPP

#include <span>
#include <vector>

#include "memplan/units.hpp"

namespace memplan {

// Monotone step-function model of one memory series: segment i spans
// sizes[i] consecutive samples under peak peaks[i], with
// peaks[i] <= peaks[i+1] and every covered sample <= peaks[i].
struct Segmentation {
  std::vector<std::int64_t> sizes;
  std::vector<Bytes> peaks;

  std::size_t segment_count() const { return sizes.size(); }
};

// Greedy two-pass segmentation into at most k segments.
//
// Pass 1 scans left to right: a sample at or below the running peak extends
// the current segment, a higher sample opens a new one. Pass 2 repeatedly
// merges the segment with the smallest merge error
// e_i = (P_{i+1} - P_i) * S_i into its successor (first index wins ties)
// until k segments remain.
Segmentation get_segments(std::span<const Bytes> mem, int k);

// Modeled overshoot of the segmentation against the series, in GB*s:
// sample_period * sum_i sum_{t in segment i} (P_i - M_t).
double wastage_of(std::span<const Bytes> mem, const Segmentation& seg, Seconds sample_period);

}  // namespace memplan

#endif  // MEMPLAN_SEGMENTATION_HPP
