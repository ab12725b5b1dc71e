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
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ldpsurv/errors.hpp"
#include "ldpsurv/kernels.hpp"
#include "ldpsurv/numerics.hpp"
#include "ldpsurv/records.hpp"

namespace ldpsurv {

/// Everything the conditional estimators need besides the data.
struct EstimatorConfig {
  Bandwidths bandwidths;
  KernelSpec kernel_x = KernelSpec::uniform();
  KernelSpec kernel_t = KernelSpec::uniform();
  double t0 = 0.0;
  double t1 = 1.0;
  int grid_size = 101;
  double denom_floor = 1e-3;
  bool clip_p = false;

  void validate() const {
    detail::require(t0 >= 0.0 && t0 < t1, "need 0 <= t0 < t1");
    detail::require(grid_size >= 2, "grid_size must be >= 2");
    detail::require(denom_floor > 0.0 && denom_floor < 0.5,
                    "denom_floor must lie in (0, 0.5)");
    detail::require(kernel_t.dimension == 1, "time kernel must be one-dimensional");
  }

  std::vector<double> grid() const { return numerics::linspace(t0, t1, grid_size); }
};

/// Values of an estimated curve on the evaluation grid. `floor_hits` counts
/// jump terms on [.., t1] whose at-risk denominator was raised to the floor.
struct Curve {
  std::vector<double> grid;
  std::vector<double> values;
  std::size_t floor_hits = 0;
};

using HazardCurve = Curve;

namespace detail {

template <class Record>
void check_records(const std::vector<Record>& data, const EstimatorConfig& cfg,
                   std::span<const double> x) {
  require(!data.empty(), "estimator called on an empty sample");
  check_dimension(cfg.kernel_x, x.size());
  for (const Record& r : data) {
    check_dimension(cfg.kernel_x, r.x.size());
  }
}

// Unnormalized covariate kernel values K_h(x - X_i) and their sum.
template <class Record>
std::vector<double> covariate_kernel(std::span<const double> x,
                                     const std::vector<Record>& data,
                                     const EstimatorConfig& cfg, double& total) {
  std::vector<double> values(data.size());
  total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    values[i] =
        scaled_kernel_between(cfg.kernel_x, cfg.bandwidths.h, x, data[i].x);
    total += values[i];
  }
  if (total == 0.0) {
    throw EmptyNeighborhood("no covariate within bandwidth h=" +
                            std::to_string(cfg.bandwidths.h));
  }
  return values;
}

template <class Record, class Include>
double weighted_fraction(std::span<const double> x,
                         const std::vector<Record>& data,
                         const EstimatorConfig& cfg, Include include) {
  check_records(data, cfg, x);
  double total = 0.0;
  const std::vector<double> k = covariate_kernel(x, data, cfg, total);
  double hit = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (include(data[i].y)) hit += k[i];
  }
  return hit / total;
}

// sum_j K_b(x - X_j) Kt_b(y - Y_j) L_j / sum_j K_b(x - X_j) Kt_b(y - Y_j).
// Computing the ratio of sums keeps 0/1 labels inside [0, 1] exactly.
template <class Record>
double smoothed_label(double y, std::span<const double> x,
                      const std::vector<Record>& data,
                      const EstimatorConfig& cfg) {
  const double b = cfg.bandwidths.b;
  double numerator = 0.0;
  double total = 0.0;
  for (const Record& r : data) {
    const double kt = scaled_kernel_between(
        cfg.kernel_t, b, std::span<const double>(&y, 1),
        std::span<const double>(&r.y, 1));
    if (kt == 0.0) continue;
    const double kx = scaled_kernel_between(cfg.kernel_x, b, x, r.x);
    if (kx == 0.0) continue;
    const double w = kt * kx;
    numerator += w * label(r);
    total += w;
  }
  if (total == 0.0) {
    throw EmptyNeighborhood("no sample within joint bandwidth b=" +
                            std::to_string(b));
  }
  const double p = numerator / total;
  return cfg.clip_p ? std::clamp(p, 0.0, 1.0) : p;
}

// Observations carrying positive covariate weight, ascending in Y, with the
// left-limit at-risk mass 1 - H_n(Y_i- | x).
struct RiskSetEntry {
  std::size_t index;
  double y;
  double weight;
  double at_risk;
};

template <class Record>
std::vector<RiskSetEntry> risk_set(std::span<const double> x,
                                   const std::vector<Record>& data,
                                   const EstimatorConfig& cfg) {
  check_records(data, cfg, x);
  double total = 0.0;
  const std::vector<double> k = covariate_kernel(x, data, cfg, total);
  std::vector<RiskSetEntry> entries;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (k[i] > 0.0) entries.push_back({i, data[i].y, k[i], 0.0});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const RiskSetEntry& a, const RiskSetEntry& b) {
                     return a.y < b.y;
                   });
  // Strictly-before mass; tied times share the same left limit.
  double before = 0.0;
  std::size_t group = 0;
  while (group < entries.size()) {
    std::size_t end = group;
    double tied = 0.0;
    while (end < entries.size() && entries[end].y == entries[group].y) {
      tied += entries[end].weight;
      ++end;
    }
    for (std::size_t i = group; i < end; ++i) {
      entries[i].at_risk = 1.0 - before / total;
      entries[i].weight /= total;
    }
    before += tied;
    group = end;
  }
  return entries;
}

template <class Record>
HazardCurve nelson_aalen(std::span<const double> x,
                         const std::vector<Record>& data,
                         const EstimatorConfig& cfg) {
  cfg.validate();
  const std::vector<RiskSetEntry> entries = risk_set(x, data, cfg);
  HazardCurve curve{cfg.grid(), {}, 0};
  curve.values.reserve(curve.grid.size());
  double cumulative = 0.0;
  std::size_t next = 0;
  for (double t : curve.grid) {
    while (next < entries.size() && entries[next].y <= t) {
      const RiskSetEntry& e = entries[next];
      const Record& r = data[e.index];
      const double p = smoothed_label(r.y, r.x, data, cfg);
      if (e.at_risk < cfg.denom_floor) ++curve.floor_hits;
      cumulative += e.weight * p / std::max(e.at_risk, cfg.denom_floor);
      ++next;
    }
    curve.values.push_back(cumulative);
  }
  return curve;
}

template <class Record>
void check_time_grid_input(const std::vector<Record>& data) {
  for (const Record& r : data) {
    require(r.y >= 0.0 && std::isfinite(r.y), "observation times must be >= 0");
  }
}

}  // namespace detail

/// H_n(t | x) = sum_i W_h(x - X_i) 1{Y_i <= t}.
template <class Record>
double cond_ecdf(double t, std::span<const double> x,
                 const std::vector<Record>& data, const EstimatorConfig& cfg) {
  return detail::weighted_fraction(x, data, cfg,
                                   [t](double y) { return y <= t; });
}

/// Left limit H_n(t- | x) = sum_i W_h(x - X_i) 1{Y_i < t}.
template <class Record>
double cond_ecdf_left(double t, std::span<const double> x,
                      const std::vector<Record>& data,
                      const EstimatorConfig& cfg) {
  return detail::weighted_fraction(x, data, cfg,
                                   [t](double y) { return y < t; });
}

/// Sub-distribution estimate sum_i W_h(x - X_i) 1{Y_i <= t} p(Y_i, X_i), with
/// p the joint-kernel smoother of the record labels (phat or pcheck).
template <class Record>
double cond_subdistribution(double t, std::span<const double> x,
                            const std::vector<Record>& data,
                            const EstimatorConfig& cfg) {
  detail::check_records(data, cfg, x);
  double total = 0.0;
  const std::vector<double> k = detail::covariate_kernel(x, data, cfg, total);
  double mass = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (k[i] > 0.0 && data[i].y <= t) {
      mass += k[i] / total * detail::smoothed_label(data[i].y, data[i].x, data, cfg);
    }
  }
  return mass;
}

/// Privacy-robust conditional failure probability: joint-kernel average of
/// the released Z_j. Unbounded unless cfg.clip_p.
inline double phat(double y, std::span<const double> x,
                   const std::vector<PrivateRecord>& data,
                   const EstimatorConfig& cfg) {
  detail::check_records(data, cfg, x);
  detail::require(cfg.kernel_t.dimension == 1, "time kernel must be one-dimensional");
  return detail::smoothed_label(y, x, data, cfg);
}

/// Same smoother applied to the true indicators (generalized Beran weights).
inline double pcheck(double y, std::span<const double> x,
                     const std::vector<SurvivalRecord>& data,
                     const EstimatorConfig& cfg) {
  detail::check_records(data, cfg, x);
  detail::require(cfg.kernel_t.dimension == 1, "time kernel must be one-dimensional");
  return detail::smoothed_label(y, x, data, cfg);
}

/// Private Nelson-Aalen cumulative hazard on the config grid:
/// sum_{Y_i <= t} W_h(x - X_i) phat(Y_i, X_i) / max(1 - H_n(Y_i- | x), floor).
inline HazardCurve nelson_aalen_private(std::span<const double> x,
                                        const std::vector<PrivateRecord>& data,
                                        const EstimatorConfig& cfg) {
  detail::check_time_grid_input(data);
  return detail::nelson_aalen(x, data, cfg);
}

/// Nelson-Aalen with pcheck in place of phat.
inline HazardCurve nelson_aalen_clean(std::span<const double> x,
                                      const std::vector<SurvivalRecord>& data,
                                      const EstimatorConfig& cfg) {
  detail::check_time_grid_input(data);
  return detail::nelson_aalen(x, data, cfg);
}

/// F = 1 - exp(-Lambda) pointwise.
inline Curve dist_from_hazard(const HazardCurve& hazard) {
  Curve dist{hazard.grid, {}, hazard.floor_hits};
  dist.values.reserve(hazard.values.size());
  for (double v : hazard.values) dist.values.push_back(-std::expm1(-v));
  return dist;
}

/// Kernel-weighted product-limit (Beran) estimate of F(t | x) on the config
/// grid, factors in ascending Y with floored left-limit denominators.
inline Curve beran_curve(std::span<const double> x,
                         const std::vector<SurvivalRecord>& data,
                         const EstimatorConfig& cfg) {
  cfg.validate();
  detail::check_time_grid_input(data);
  const std::vector<detail::RiskSetEntry> entries = detail::risk_set(x, data, cfg);
  Curve curve{cfg.grid(), {}, 0};
  curve.values.reserve(curve.grid.size());
  double survival = 1.0;
  std::size_t next = 0;
  for (double t : curve.grid) {
    while (next < entries.size() && entries[next].y <= t) {
      const detail::RiskSetEntry& e = entries[next];
      if (data[e.index].delta == 1) {
        if (e.at_risk < cfg.denom_floor) ++curve.floor_hits;
        survival *= 1.0 - e.weight / std::max(e.at_risk, cfg.denom_floor);
      }
      ++next;
    }
    curve.values.push_back(1.0 - survival);
  }
  return curve;
}

/// Beran estimate at a single time point.
inline double beran(double t, std::span<const double> x,
                    const std::vector<SurvivalRecord>& data,
                    const EstimatorConfig& cfg) {
  detail::check_time_grid_input(data);
  const std::vector<detail::RiskSetEntry> entries = detail::risk_set(x, data, cfg);
  double survival = 1.0;
  for (const detail::RiskSetEntry& e : entries) {
    if (e.y > t) break;
    if (data[e.index].delta == 1) {
      survival *= 1.0 - e.weight / std::max(e.at_risk, cfg.denom_floor);
    }
  }
  return 1.0 - survival;
}

/// Rate-optimal bandwidth h = (alpha^2 n)^(-1 / (2 beta + p)).
inline double optimal_bandwidth(long long n, double alpha, double beta, int p) {
  detail::require(n >= 1, "optimal_bandwidth: n must be >= 1");
  detail::require(alpha > 0.0 && std::isfinite(alpha),
                  "optimal_bandwidth: alpha must be > 0");
  detail::require(beta > 0.0 && beta <= 1.0,
                  "optimal_bandwidth: beta must lie in (0, 1]");
  detail::require(p >= 1, "optimal_bandwidth: p must be >= 1");
  return std::pow(alpha * alpha * static_cast<double>(n),
                  -1.0 / (2.0 * beta + p));
}

}  // namespace ldpsurv
