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

#ifndef MEMPLAN_UNITS_HPP
#define MEMPLAN_UNITS_HPP

#include <cstdint>

namespace memplan {

// Measured memory is kept in integer bytes; predicted quantities (plan
// limits, regression outputs) are real-valued bytes.
using Bytes = std::int64_t;
using Seconds = double;

// Decimal gigabyte. All reported wastage is GB*s with this constant.
inline constexpr double kBytesPerGb = 1e9;

inline constexpr double bytes_to_gb(double bytes) { return bytes / kBytesPerGb; }
inline constexpr double gb_to_bytes(double gb) { return gb * kBytesPerGb; }

// Relative slack for floating-point boundary comparisons during replay.
// An allocation equal to the usage survives; sub-byte jitter from
// regression arithmetic must not flip that.
inline constexpr double kReplaySlack = 1e-9;

}  // namespace memplan

#endif  // MEMPLAN_UNITS_HPP
