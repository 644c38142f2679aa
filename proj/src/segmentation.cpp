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

#include "memplan/segmentation.hpp"

#include <stdexcept>

namespace memplan {

Segmentation get_segments(std::span<const Bytes> mem, int k) {
  if (mem.empty()) throw std::invalid_argument("get_segments: empty series");
  if (k < 1) throw std::invalid_argument("get_segments: k must be >= 1");

  Segmentation seg;
  seg.sizes.push_back(1);
  seg.peaks.push_back(mem[0]);
  for (std::size_t i = 1; i < mem.size(); ++i) {
    if (mem[i] <= seg.peaks.back()) {
      ++seg.sizes.back();  // equal values extend, avoiding unit segments on plateaus
    } else {
      seg.sizes.push_back(1);
      seg.peaks.push_back(mem[i]);
    }
  }

  while (seg.segment_count() > static_cast<std::size_t>(k)) {
    std::size_t best = 0;
    std::int64_t best_err = 0;
    for (std::size_t i = 0; i + 1 < seg.segment_count(); ++i) {
      std::int64_t err = (seg.peaks[i + 1] - seg.peaks[i]) * seg.sizes[i];
      if (i == 0 || err < best_err) {
        best = i;
        best_err = err;
      }
    }
    seg.sizes[best + 1] += seg.sizes[best];  // successor keeps its peak
    seg.sizes.erase(seg.sizes.begin() + static_cast<std::ptrdiff_t>(best));
    seg.peaks.erase(seg.peaks.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return seg;
}

double wastage_of(std::span<const Bytes> mem, const Segmentation& seg, Seconds sample_period) {
  std::int64_t covered = 0;
  for (auto s : seg.sizes) covered += s;
  if (covered != static_cast<std::int64_t>(mem.size())) {
    throw std::invalid_argument("wastage_of: segmentation does not cover the series");
  }
  double byte_samples = 0.0;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < seg.segment_count(); ++i) {
    for (std::int64_t j = 0; j < seg.sizes[i]; ++j, ++pos) {
      Bytes gap = seg.peaks[i] - mem[pos];
      if (gap < 0) throw std::invalid_argument("wastage_of: sample above its segment peak");
      byte_samples += static_cast<double>(gap);
    }
  }
  return bytes_to_gb(byte_samples) * sample_period;
}

}  // namespace memplan
