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
#include <span>
#include <string>
#include <vector>

#include "ldpsurv/errors.hpp"
#include "ldpsurv/numerics.hpp"
#include "ldpsurv/random.hpp"
#include "ldpsurv/records.hpp"

namespace ldpsurv {

/// Additive Laplace channel on a failure bit:
/// q(z | b) = (alpha / 2) exp(-alpha |z - b|), i.e. noise scale 1 / alpha.
class LaplaceChannel {
 public:
  explicit LaplaceChannel(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw ArgumentError("privacy level alpha must be a finite value > 0");
    }
    scale_ = 1.0 / alpha_;
  }

  double alpha() const { return alpha_; }
  double scale() const { return scale_; }

  double log_density(double z, int b) const {
    return std::log(0.5 * alpha_) - alpha_ * std::abs(z - b);
  }

  double density(double z, int b) const {
    return 0.5 * alpha_ * std::exp(-alpha_ * std::abs(z - b));
  }

  /// Inverse-CDF draw from one open-interval uniform.
  double sample_noise(RandomStream& rng) const {
    const double centered = rng.open_uniform() - 0.5;
    const double sign = (centered > 0.0) - (centered < 0.0);
    return -scale_ * sign * std::log1p(-2.0 * std::abs(centered));
  }

 private:
  double alpha_;
  double scale_;
};

namespace detail {

inline void require_bit(int b) {
  if (b != 0 && b != 1) throw ArgumentError("indicator must be 0 or 1");
}

}  // namespace detail

inline double channel_density(const LaplaceChannel& ch, double z, int b) {
  detail::require_bit(b);
  return ch.density(z, b);
}

/// Z_k = delta_k + mu_k with mu_k i.i.d. Laplace(0, 1/alpha) drawn in order
/// from `rng`.
inline std::vector<double> privatize(const LaplaceChannel& ch,
                                     std::span<const int> deltas,
                                     RandomStream& rng) {
  std::vector<double> released;
  released.reserve(deltas.size());
  for (int delta : deltas) {
    detail::require_bit(delta);
    released.push_back(static_cast<double>(delta) + ch.sample_noise(rng));
  }
  return released;
}

/// Release records with Z_i = delta_i + noise[i]. A zero noise vector gives
/// Z_i == delta_i exactly.
inline std::vector<PrivateRecord> attach_noise(
    const std::vector<SurvivalRecord>& records, std::span<const double> noise) {
  detail::require(records.size() == noise.size(),
                  "attach_noise: one noise value per record required");
  std::vector<PrivateRecord> released;
  released.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    detail::require_bit(records[i].delta);
    released.push_back(
        {records[i].y, static_cast<double>(records[i].delta) + noise[i],
         records[i].x});
  }
  return released;
}

inline std::vector<PrivateRecord> privatize(
    const LaplaceChannel& ch, const std::vector<SurvivalRecord>& records,
    RandomStream& rng) {
  std::vector<double> noise(records.size());
  for (double& mu : noise) mu = ch.sample_noise(rng);
  return attach_noise(records, noise);
}

/// Largest q(z|b) / q(z|b') over the grid and all bit pairs. Bounded by
/// exp(alpha) for an alpha-LDP channel.
inline double ldp_ratio_audit(const LaplaceChannel& ch,
                              std::span<const double> z_grid) {
  detail::require(!z_grid.empty(), "ldp_ratio_audit: empty grid");
  double worst = 0.0;
  for (double z : z_grid) {
    const double q0 = ch.density(z, 0);
    const double q1 = ch.density(z, 1);
    worst = std::max({worst, q0 / q1, q1 / q0, q0 / q0});
  }
  return worst;
}

/// Renyi divergence D_gamma(q(.|b) || q(.|b2)) by adaptive Simpson quadrature
/// on [min(b,b2) - 40/alpha, max(b,b2) + 40/alpha].
///
/// The integrand p^gamma q^(1-gamma) is rescaled by its maximum (attained at
/// b or b2) so large gamma does not overflow.
inline double renyi_divergence(const LaplaceChannel& ch, double gamma, int b,
                               int b2) {
  detail::require(gamma > 1.0 && std::isfinite(gamma),
                  "Renyi order gamma must be > 1");
  detail::require_bit(b);
  detail::require_bit(b2);
  const double alpha = ch.alpha();
  auto log_integrand = [&](double z) {
    return gamma * ch.log_density(z, b) + (1.0 - gamma) * ch.log_density(z, b2);
  };
  const double peak = std::max(log_integrand(b), log_integrand(b2));
  auto integrand = [&](double z) { return std::exp(log_integrand(z) - peak); };

  const double lo_knot = std::min(b, b2);
  const double hi_knot = std::max(b, b2);
  const double lo = lo_knot - 40.0 / alpha;
  const double hi = hi_knot + 40.0 / alpha;
  constexpr double kTolerance = 1e-10;
  // Split at the kinks so every piece is smooth.
  double mass = numerics::adaptive_simpson(integrand, lo, lo_knot, kTolerance / 3);
  mass += numerics::adaptive_simpson(integrand, lo_knot, hi_knot, kTolerance / 3);
  mass += numerics::adaptive_simpson(integrand, hi_knot, hi, kTolerance / 3);
  return std::max(0.0, (peak + std::log(mass)) / (gamma - 1.0));
}

struct RenyiValue {
  double gamma;
  double value;
};

struct AuditReport {
  double alpha;
  double max_ratio;
  double bound;
  std::vector<RenyiValue> renyi;
  bool pass;
};

inline std::vector<double> default_renyi_orders() { return {1.5, 2.0, 10.0, 100.0}; }

/// z in [-2, 3] with step 0.001; covers both sides of the [0, 1] plateau.
inline std::vector<double> default_audit_grid() {
  return numerics::linspace(-2.0, 3.0, 5001);
}

/// Ratio audit plus Renyi divergences for both bit orders. Passes when the
/// ratio stays under e^alpha (1 + 1e-9) and every divergence under
/// alpha + 1e-6.
inline AuditReport audit_channel(const LaplaceChannel& ch,
                                 std::vector<double> gammas,
                                 std::span<const double> z_grid) {
  if (gammas.empty()) gammas = default_renyi_orders();
  AuditReport report{ch.alpha(), ldp_ratio_audit(ch, z_grid),
                     std::exp(ch.alpha()), {}, true};
  report.pass = report.max_ratio <= report.bound * (1.0 + 1e-9);
  for (double gamma : gammas) {
    const double value = std::max(renyi_divergence(ch, gamma, 0, 1),
                                  renyi_divergence(ch, gamma, 1, 0));
    report.renyi.push_back({gamma, value});
    report.pass = report.pass && value <= ch.alpha() + 1e-6;
  }
  return report;
}

}  // namespace ldpsurv
