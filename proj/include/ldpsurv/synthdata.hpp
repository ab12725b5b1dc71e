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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ldpsurv/errors.hpp"
#include "ldpsurv/random.hpp"
#include "ldpsurv/records.hpp"

namespace ldpsurv {

/// X ~ U[0,1]; T | X and C | X exponential with rates <lambda, (1, X, X^2)>.
struct ExpModel {
  std::array<double, 3> lambda_t{1.0, 1.0, 1.0};
  std::array<double, 3> lambda_c{1.0, 1.0, 1.0};

  static double rate(const std::array<double, 3>& lambda, double x) {
    return lambda[0] + lambda[1] * x + lambda[2] * x * x;
  }
  double rate_t(double x) const { return rate(lambda_t, x); }
  double rate_c(double x) const { return rate(lambda_c, x); }

  /// Both rates must stay positive on a 1001-point grid over [0, 1].
  void validate() const {
    for (int i = 0; i <= 1000; ++i) {
      const double x = i / 1000.0;
      if (!(rate_t(x) > 0.0) || !(rate_c(x) > 0.0) ||
          !std::isfinite(rate_t(x)) || !std::isfinite(rate_c(x))) {
        throw ArgumentError("exponential rates must be positive on [0, 1]");
      }
    }
  }
};

/// Generated sample together with the latent failure and censoring times.
struct LatentSample {
  std::vector<SurvivalRecord> records;
  std::vector<double> failure_times;
  std::vector<double> censoring_times;
};

namespace detail {

inline double exponential_draw(RandomStream& stream, double rate) {
  return -std::log1p(-stream.open_uniform()) / rate;
}

}  // namespace detail

/// Draws n records; X, T and C come from three independent substreams
/// seeded from `rng`.
inline LatentSample generate_latent(const ExpModel& model, long long n,
                                    RandomStream& rng) {
  detail::require(n >= 1, "generate: n must be >= 1");
  model.validate();
  RandomStream x_stream(rng.next_word());
  RandomStream t_stream(rng.next_word());
  RandomStream c_stream(rng.next_word());
  LatentSample sample;
  const auto count = static_cast<std::size_t>(n);
  sample.records.reserve(count);
  sample.failure_times.reserve(count);
  sample.censoring_times.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = x_stream.open_uniform();
    const double t = detail::exponential_draw(t_stream, model.rate_t(x));
    const double c = detail::exponential_draw(c_stream, model.rate_c(x));
    sample.records.push_back({std::min(t, c), t <= c ? 1 : 0, {x}});
    sample.failure_times.push_back(t);
    sample.censoring_times.push_back(c);
  }
  return sample;
}

/// Released sample (Y, delta, X) only.
inline std::vector<SurvivalRecord> generate(const ExpModel& model, long long n,
                                            RandomStream& rng) {
  return generate_latent(model, n, rng).records;
}

/// P(T <= C | X = x), the probability that the failure is observed. The
/// censoring fraction is its complement.
inline double censoring_proportion(const ExpModel& model, double x) {
  detail::require(x >= 0.0 && x <= 1.0, "covariate must lie in [0, 1]");
  const double rt = model.rate_t(x);
  const double rc = model.rate_c(x);
  if (!(rt > 0.0) || !(rc > 0.0)) {
    throw ArgumentError("exponential rates must be positive");
  }
  return rt / (rt + rc);
}

/// F_T(t | x) = 1 - exp(-rate_T(x) t).
inline double true_cdf(const ExpModel& model, double t, double x) {
  detail::require(t >= 0.0, "time must be >= 0");
  return -std::expm1(-model.rate_t(x) * t);
}

/// Lambda_T(t | x) = rate_T(x) t.
inline double true_hazard(const ExpModel& model, double t, double x) {
  detail::require(t >= 0.0, "time must be >= 0");
  return model.rate_t(x) * t;
}

}  // namespace ldpsurv
