// Copyright 2026 The ldpsurv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ldpsurv {

/// Invalid argument or configuration (bad bandwidth, alpha <= 0, dimension
/// mismatch, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No sample point falls inside the kernel support around the evaluation
/// point, so Nadaraya-Watson weights are undefined (0/0).
class EmptyNeighborhood : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (missing CSV column, unparsable value, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ArgumentError(message);
}

}  // namespace detail
}  // namespace ldpsurv
