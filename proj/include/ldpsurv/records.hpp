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

#include <vector>

#include "ldpsurv/kernels.hpp"

namespace ldpsurv {

/// One raw observation: Y = min(T, C), delta = 1{T <= C}, covariate X.
struct SurvivalRecord {
  double y;
  int delta;
  Covariate x;
};

/// One released observation: Y, Z = delta + Laplace noise, covariate X.
/// Z is never clipped.
struct PrivateRecord {
  double y;
  double z;
  Covariate x;
};

/// The failure label an estimator smooths: delta for raw data, Z for
/// privatized data.
inline double label(const SurvivalRecord& r) { return static_cast<double>(r.delta); }
inline double label(const PrivateRecord& r) { return r.z; }

}  // namespace ldpsurv
