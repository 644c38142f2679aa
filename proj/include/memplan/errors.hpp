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

#ifndef MEMPLAN_ERRORS_HPP
#define MEMPLAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace memplan {

// Malformed input file (bad JSON, wrong field type). Message carries the
// file line number where applicable.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input that violates a data invariant. Message names
// the offending execution_id and field.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A retry policy that can no longer raise the effective limit.
class RetryExhaustedError : public std::runtime_error {
 public:
  explicit RetryExhaustedError(const std::string& what) : std::runtime_error(what) {}
};

// Bad experiment or method configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace memplan

#endif  // MEMPLAN_ERRORS_HPP
