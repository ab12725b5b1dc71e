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
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "ldpsurv/errors.hpp"

namespace ldpsurv::numerics {

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol,
                        int max_depth = 60) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Trapezoidal rule for samples `values` on the ascending abscissae `grid`.
inline double trapezoid(std::span<const double> grid,
                        std::span<const double> values) {
  ldpsurv::detail::require(grid.size() == values.size() && grid.size() >= 2,
                           "trapezoid: need matching grids of size >= 2");
  double total = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    total += 0.5 * (grid[i] - grid[i - 1]) * (values[i] + values[i - 1]);
  }
  return total;
}

/// Trapezoidal average over the grid span.
inline double trapezoid_mean(std::span<const double> grid,
                             std::span<const double> values) {
  return trapezoid(grid, values) / (grid.back() - grid.front());
}

/// Uniform grid of `size` points on [lo, hi], endpoints exact.
inline std::vector<double> linspace(double lo, double hi, int size) {
  ldpsurv::detail::require(size >= 2, "grid size must be >= 2");
  std::vector<double> grid(static_cast<std::size_t>(size));
  const double step = (hi - lo) / (size - 1);
  for (int i = 0; i < size; ++i) grid[i] = lo + step * i;
  grid.back() = hi;
  return grid;
}

inline double mean(std::span<const double> xs) {
  ldpsurv::detail::require(!xs.empty(), "mean of empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
}

/// Sample standard deviation (n - 1 denominator).
inline double stddev(std::span<const double> xs) {
  ldpsurv::detail::require(xs.size() >= 2, "stddev needs >= 2 values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (xs.size() - 1));
}

/// Empirical quantile with linear interpolation between order statistics.
inline double quantile(std::vector<double> xs, double q) {
  ldpsurv::detail::require(!xs.empty(), "quantile of empty sample");
  ldpsurv::detail::require(q >= 0.0 && q <= 1.0, "quantile level outside [0,1]");
  std::sort(xs.begin(), xs.end());
  const double pos = q * (xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (pos - lo) * (xs[hi] - xs[lo]);
}

struct LinearFit {
  double slope;
  double intercept;
  double slope_se;  // residual-based; NaN with two points
};

/// Ordinary least squares y = intercept + slope * x.
inline LinearFit least_squares(std::span<const double> xs,
                               std::span<const double> ys) {
  ldpsurv::detail::require(xs.size() == ys.size() && xs.size() >= 2,
                           "least_squares: need >= 2 paired points");
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  ldpsurv::detail::require(sxx > 0.0, "least_squares: degenerate abscissae");
  LinearFit fit{sxy / sxx, 0.0, std::nan("")};
  fit.intercept = my - fit.slope * mx;
  if (xs.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - fit.intercept - fit.slope * xs[i];
      ssr += r * r;
    }
    fit.slope_se = std::sqrt(ssr / (xs.size() - 2) / sxx);
  }
  return fit;
}

}  // namespace ldpsurv::numerics
