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

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ldpsurv/errors.hpp"

namespace ldpsurv {

using Covariate = std::vector<double>;

enum class KernelShape { Uniform, Epanechnikov, Triangular };

inline const char* to_string(KernelShape shape) {
  switch (shape) {
    case KernelShape::Uniform: return "uniform";
    case KernelShape::Epanechnikov: return "epanechnikov";
    case KernelShape::Triangular: return "triangular";
  }
  return "unknown";
}

/// Radially symmetric density kernel supported on the closed unit ball of
/// R^dimension.
struct KernelSpec {
  KernelShape shape = KernelShape::Uniform;
  int dimension = 1;

  static KernelSpec uniform(int dimension = 1) {
    return {KernelShape::Uniform, dimension};
  }
};

/// Smoothing radii: h for the covariate weights, b for the joint
/// (time, covariate) weights used by the conditional probability estimate.
struct Bandwidths {
  double h;
  double b;

  Bandwidths(double h_, double b_) : h(h_), b(b_) {
    detail::require(h > 0.0 && std::isfinite(h), "bandwidth h must be > 0");
    detail::require(b > 0.0 && std::isfinite(b), "bandwidth b must be > 0");
  }

  /// b = sqrt(h).
  static Bandwidths coupled(double h) {
    detail::require(h > 0.0 && std::isfinite(h), "bandwidth h must be > 0");
    return {h, std::sqrt(h)};
  }
};

/// Whether h <= b^((1+p)/p), the coupling under which the private
/// estimator attains the optimal rate.
inline bool rate_coupling_holds(const Bandwidths& bw, int p) {
  const double limit = std::pow(bw.b, (1.0 + p) / p);
  return bw.h <= limit * (1.0 + 1e-12);
}

namespace detail {

inline double unit_ball_volume(int p) {
  if (p == 1) return 2.0;
  if (p == 2) return std::numbers::pi;
  return std::pow(std::numbers::pi, 0.5 * p) / std::tgamma(0.5 * p + 1.0);
}

// Kernel value as a function of the Euclidean radius of its argument.
inline double kernel_profile(const KernelSpec& k, double radius) {
  if (!(radius <= 1.0)) return 0.0;
  const double volume = unit_ball_volume(k.dimension);
  switch (k.shape) {
    case KernelShape::Uniform:
      return 1.0 / volume;
    case KernelShape::Epanechnikov:
      return (k.dimension + 2.0) / (2.0 * volume) * (1.0 - radius * radius);
    case KernelShape::Triangular:
      return (k.dimension + 1.0) / volume * (1.0 - radius);
  }
  return 0.0;
}

inline void check_dimension(const KernelSpec& k, std::size_t size) {
  if (k.dimension < 1 || static_cast<std::size_t>(k.dimension) != size) {
    throw ArgumentError("kernel dimension " + std::to_string(k.dimension) +
                        " does not match argument length " +
                        std::to_string(size));
  }
}

// K((a - b) / h) / h^p without materializing the difference vector.
inline double scaled_kernel_between(const KernelSpec& k, double h,
                                    std::span<const double> a,
                                    std::span<const double> b) {
  double radius;
  if (a.size() == 1) {
    radius = std::abs((a[0] - b[0]) / h);
  } else {
    double squared = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double u = (a[i] - b[i]) / h;
      squared += u * u;
    }
    radius = std::sqrt(squared);
  }
  const double value = kernel_profile(k, radius);
  if (value == 0.0) return 0.0;
  return value / (k.dimension == 1 ? h : std::pow(h, k.dimension));
}

}  // namespace detail

/// K(u). Zero outside the closed unit ball.
inline double kernel_eval(const KernelSpec& k, std::span<const double> u) {
  detail::check_dimension(k, u.size());
  double squared = 0.0;
  for (double v : u) squared += v * v;
  const double radius = u.size() == 1 ? std::abs(u[0]) : std::sqrt(squared);
  return detail::kernel_profile(k, radius);
}

inline double kernel_eval(const KernelSpec& k, double u) {
  return kernel_eval(k, std::span<const double>(&u, 1));
}

/// K_h(diff) = K(diff / h) / h^p.
inline double scaled_kernel(const KernelSpec& k, double h,
                            std::span<const double> diff) {
  detail::require(h > 0.0, "bandwidth must be > 0");
  detail::check_dimension(k, diff.size());
  const std::vector<double> zero(diff.size(), 0.0);
  return detail::scaled_kernel_between(k, h, diff, zero);
}

inline double scaled_kernel(const KernelSpec& k, double h, double diff) {
  return scaled_kernel(k, h, std::span<const double>(&diff, 1));
}

/// Nadaraya-Watson weights W_h(x0 - X_i) = K_h(x0 - X_i) / sum_j K_h(x0 - X_j).
///
/// Throws EmptyNeighborhood when every kernel value is zero.
inline std::vector<double> nw_weights(std::span<const double> x0,
                                      const std::vector<Covariate>& xs,
                                      double h, const KernelSpec& k) {
  detail::require(!xs.empty(), "nw_weights: empty sample");
  detail::require(h > 0.0, "bandwidth must be > 0");
  detail::check_dimension(k, x0.size());
  std::vector<double> weights(xs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    detail::check_dimension(k, xs[i].size());
    weights[i] = detail::scaled_kernel_between(k, h, x0, xs[i]);
    total += weights[i];
  }
  if (total == 0.0) {
    throw EmptyNeighborhood("no covariate within bandwidth h=" +
                            std::to_string(h));
  }
  for (double& w : weights) w /= total;
  return weights;
}

/// One (time, covariate) sample for joint_weights.
struct TimeCovariate {
  double y;
  Covariate x;
};

/// Product-kernel weights K_b(x0 - X_j) Kt_b(y0 - Y_j), normalized to sum 1.
inline std::vector<double> joint_weights(double y0, std::span<const double> x0,
                                         const std::vector<TimeCovariate>& samples,
                                         double b, const KernelSpec& kx,
                                         const KernelSpec& kt) {
  detail::require(!samples.empty(), "joint_weights: empty sample");
  detail::require(b > 0.0, "bandwidth must be > 0");
  detail::require(kt.dimension == 1, "time kernel must be one-dimensional");
  detail::check_dimension(kx, x0.size());
  std::vector<double> weights(samples.size());
  double total = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    detail::check_dimension(kx, samples[j].x.size());
    const double kt_value = detail::scaled_kernel_between(
        kt, b, std::span<const double>(&y0, 1),
        std::span<const double>(&samples[j].y, 1));
    weights[j] = kt_value == 0.0
                     ? 0.0
                     : kt_value * detail::scaled_kernel_between(kx, b, x0,
                                                                samples[j].x);
    total += weights[j];
  }
  if (total == 0.0) {
    throw EmptyNeighborhood("no sample within joint bandwidth b=" +
                            std::to_string(b));
  }
  for (double& w : weights) w /= total;
  return weights;
}

}  // namespace ldpsurv
