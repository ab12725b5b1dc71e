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
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ldpsurv/errors.hpp"
#include "ldpsurv/estimators.hpp"
#include "ldpsurv/numerics.hpp"
#include "ldpsurv/privacy.hpp"
#include "ldpsurv/random.hpp"
#include "ldpsurv/synthdata.hpp"

namespace ldpsurv {

/// More than 1% of the replications of a run hit EmptyNeighborhood.
class DegenerateRunError : public std::runtime_error {
 public:
  DegenerateRunError(std::size_t degenerate, std::size_t total)
      : std::runtime_error(std::to_string(degenerate) + " of " +
                           std::to_string(total) +
                           " replications were degenerate (limit 1%)"),
        degenerate_(degenerate),
        total_(total) {}

  std::size_t degenerate() const { return degenerate_; }
  std::size_t total() const { return total_; }

 private:
  std::size_t degenerate_;
  std::size_t total_;
};

struct BandwidthRule {
  enum class Kind { Fixed, PlugIn };
  Kind kind = Kind::PlugIn;
  double value = 5.0;  // h for Fixed, multiplier for PlugIn

  static BandwidthRule fixed(double h) { return {Kind::Fixed, h}; }
  static BandwidthRule plug_in(double multiplier) { return {Kind::PlugIn, multiplier}; }
};

struct ExperimentPlan {
  ExpModel model;
  long long n = 500;
  int replications = 300;
  std::vector<double> alphas{0.2, 0.3, 0.4};
  double x_eval = 0.5;
  std::optional<double> t0;  // unset: pilot quantile
  std::optional<double> t1;
  int grid_size = 101;
  BandwidthRule bandwidth_rule;
  std::uint64_t master_seed = 0;
  double denom_floor = 1e-3;
  bool clip_p = false;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const {
    model.validate();
    detail::require(n >= 1, "n must be >= 1");
    detail::require(replications >= 1, "replications must be >= 1");
    detail::require(!alphas.empty(), "at least one alpha required");
    for (double a : alphas) {
      detail::require(a > 0.0 && std::isfinite(a), "alpha must be > 0");
    }
    detail::require(x_eval >= 0.0 && x_eval <= 1.0, "x_eval must lie in [0, 1]");
    detail::require(grid_size >= 2, "grid_size must be >= 2");
    detail::require(bandwidth_rule.value > 0.0, "bandwidth rule value must be > 0");
    if (t0 && t1) detail::require(*t0 < *t1, "need t0 < t1");
  }
};

struct TimeWindow {
  double t0;
  double t1;
};

namespace seed_tags {
inline constexpr std::uint64_t kPilot = 1;
inline constexpr std::uint64_t kDataset = 2;
inline constexpr std::uint64_t kNoise = 3;
inline constexpr std::uint64_t kRateDataset = 4;
inline constexpr std::uint64_t kRateNoise = 5;
}  // namespace seed_tags

/// [lo_q, hi_q]-quantiles of Y | X = x from a pilot sample.
inline TimeWindow pilot_window(const ExpModel& model, double x,
                               std::uint64_t master_seed,
                               long long pilot_size = 100000,
                               double lo_q = 0.05, double hi_q = 0.9) {
  model.validate();
  RandomStream t_stream(derive_seed(master_seed, {seed_tags::kPilot, 0}));
  RandomStream c_stream(derive_seed(master_seed, {seed_tags::kPilot, 1}));
  std::vector<double> ys(static_cast<std::size_t>(pilot_size));
  for (double& y : ys) {
    const double t = detail::exponential_draw(t_stream, model.rate_t(x));
    const double c = detail::exponential_draw(c_stream, model.rate_c(x));
    y = std::min(t, c);
  }
  return {numerics::quantile(ys, lo_q), numerics::quantile(ys, hi_q)};
}

/// multiplier * 1.06 * sd * n^(-1/5), the normal-reference rule applied to a
/// one-dimensional covariate sample.
inline double normal_reference_bandwidth(std::span<const double> xs,
                                         double multiplier) {
  detail::require(xs.size() >= 10, "plug-in bandwidth needs n >= 10");
  detail::require(multiplier > 0.0, "bandwidth multiplier must be > 0");
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  const double sd = *lo == *hi ? 0.0 : numerics::stddev(xs);
  if (!(sd > 0.0)) throw ArgumentError("covariate sample has zero variance");
  return multiplier * 1.06 * sd * std::pow(static_cast<double>(xs.size()), -0.2);
}

template <class Record>
double bandwidth_plugin(const std::vector<Record>& data, double multiplier) {
  std::vector<double> xs;
  xs.reserve(data.size());
  for (const Record& r : data) {
    detail::require(r.x.size() == 1, "plug-in bandwidth supports p = 1 only");
    xs.push_back(r.x[0]);
  }
  return normal_reference_bandwidth(xs, multiplier);
}

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index
/// runs exactly once; the first exception is rethrown after all workers join.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// The three conditional CDF estimates of one replication.
struct ReplicationResult {
  Curve private_cdf;  // 1 - exp(-private Nelson-Aalen)
  Curve gberan_cdf;   // 1 - exp(-Nelson-Aalen with pcheck)
  Curve beran_cdf;    // product-limit
  bool degenerate = false;
  std::string degenerate_reason;
  double censoring_fraction = 0.0;
  double h = 0.0;
  double b = 0.0;
};

inline std::vector<SurvivalRecord> replication_dataset(const ExperimentPlan& plan,
                                                       std::size_t index) {
  RandomStream rng(derive_seed(plan.master_seed, {seed_tags::kDataset, index}));
  return generate(plan.model, plan.n, rng);
}

/// One replication at privacy level `alpha`. Dataset and standardized noise
/// depend only on (master_seed, index), so replications are paired across
/// alpha values.
inline ReplicationResult run_replication(const ExperimentPlan& plan, double alpha,
                                         std::size_t index,
                                         const TimeWindow& window) {
  const std::vector<SurvivalRecord> data = replication_dataset(plan, index);
  ReplicationResult result;
  double censored = 0.0;
  for (const SurvivalRecord& r : data) censored += 1 - r.delta;
  result.censoring_fraction = censored / data.size();

  const double h = plan.bandwidth_rule.kind == BandwidthRule::Kind::Fixed
                       ? plan.bandwidth_rule.value
                       : bandwidth_plugin(data, plan.bandwidth_rule.value);
  EstimatorConfig cfg{Bandwidths::coupled(h)};
  cfg.t0 = window.t0;
  cfg.t1 = window.t1;
  cfg.grid_size = plan.grid_size;
  cfg.denom_floor = plan.denom_floor;
  cfg.clip_p = plan.clip_p;
  result.h = cfg.bandwidths.h;
  result.b = cfg.bandwidths.b;

  const LaplaceChannel channel(alpha);
  RandomStream noise_rng(derive_seed(plan.master_seed, {seed_tags::kNoise, index}));
  const std::vector<PrivateRecord> released = privatize(channel, data, noise_rng);

  const Covariate x{plan.x_eval};
  try {
    result.private_cdf = dist_from_hazard(nelson_aalen_private(x, released, cfg));
    result.gberan_cdf = dist_from_hazard(nelson_aalen_clean(x, data, cfg));
    result.beran_cdf = beran_curve(x, data, cfg);
  } catch (const EmptyNeighborhood& e) {
    result.degenerate = true;
    result.degenerate_reason = e.what();
  }
  return result;
}

/// Pointwise error decomposition over replications.
struct ErrorProfile {
  std::vector<double> mse;
  std::vector<double> bias;
  std::vector<double> bias2;
  std::vector<double> variance;
};

/// MSE(t) = mean_k (E_k(t) - truth(t))^2 with bias^2 + variance split.
inline ErrorProfile mse_aggregate(const std::vector<std::vector<double>>& estimates,
                                  std::span<const double> truth) {
  if (estimates.empty()) {
    throw ArgumentError("mse_aggregate: no non-degenerate replication");
  }
  const std::size_t m = truth.size();
  ErrorProfile out{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0),
                   std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
  const double count = static_cast<double>(estimates.size());
  std::vector<double> mean(m, 0.0);
  for (const std::vector<double>& e : estimates) {
    detail::require(e.size() == m, "mse_aggregate: curve length mismatch");
    for (std::size_t i = 0; i < m; ++i) {
      const double err = e[i] - truth[i];
      out.mse[i] += err * err;
      mean[i] += e[i];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    out.mse[i] /= count;
    mean[i] /= count;
    out.bias[i] = mean[i] - truth[i];
    out.bias2[i] = out.bias[i] * out.bias[i];
  }
  for (const std::vector<double>& e : estimates) {
    for (std::size_t i = 0; i < m; ++i) {
      out.variance[i] += (e[i] - mean[i]) * (e[i] - mean[i]);
    }
  }
  for (double& v : out.variance) v /= count;
  return out;
}

struct MseReport {
  std::vector<double> grid;
  std::vector<double> truth;
  ErrorProfile private_error;
  ErrorProfile gberan_error;
  ErrorProfile beran_error;

  double alpha = 0.0;
  double nominal_censoring = 0.0;    // 1 - P(T <= C | x_eval)
  double empirical_censoring = 0.0;  // mean of 1 - delta over used datasets
  double h_mean = 0.0;
  double b_mean = 0.0;
  std::uint64_t seed = 0;
  std::size_t replications_used = 0;
  std::size_t degenerate = 0;
  std::size_t floor_hits = 0;
};

/// Grid average of an MSE curve via the trapezoid rule.
inline double time_averaged(const std::vector<double>& grid,
                            const std::vector<double>& values) {
  return numerics::trapezoid_mean(grid, values);
}

/// Grid-averaged |bias_a - bias_b|.
inline double mean_abs_bias_gap(const MseReport& report, const ErrorProfile& a,
                                const ErrorProfile& b) {
  std::vector<double> gap(report.grid.size());
  for (std::size_t i = 0; i < gap.size(); ++i) gap[i] = std::abs(a.bias[i] - b.bias[i]);
  return numerics::trapezoid_mean(report.grid, gap);
}

inline TimeWindow resolve_window(const ExperimentPlan& plan) {
  if (plan.t0 && plan.t1) return {*plan.t0, *plan.t1};
  TimeWindow window = pilot_window(plan.model, plan.x_eval, plan.master_seed);
  if (plan.t0) window.t0 = *plan.t0;
  if (plan.t1) window.t1 = *plan.t1;
  detail::require(window.t0 < window.t1, "need t0 < t1");
  return window;
}

/// MSE comparison of the private, generalized Beran and Beran estimators at
/// x_eval, one report per alpha. Throws DegenerateRunError when more than 1%
/// of the replications for some alpha are degenerate.
inline std::vector<MseReport> run_mse_experiment(const ExperimentPlan& plan) {
  plan.validate();
  const TimeWindow window = resolve_window(plan);
  const std::size_t reps = static_cast<std::size_t>(plan.replications);
  const std::size_t tasks = reps * plan.alphas.size();
  std::vector<ReplicationResult> results(tasks);
  parallel_for(tasks, plan.threads, [&](std::size_t task) {
    results[task] = run_replication(plan, plan.alphas[task / reps], task % reps, window);
  });

  std::vector<MseReport> reports;
  for (std::size_t a = 0; a < plan.alphas.size(); ++a) {
    MseReport report;
    report.alpha = plan.alphas[a];
    report.seed = plan.master_seed;
    report.nominal_censoring = 1.0 - censoring_proportion(plan.model, plan.x_eval);
    std::vector<std::vector<double>> priv, gber, ber;
    for (std::size_t k = 0; k < reps; ++k) {
      const ReplicationResult& r = results[a * reps + k];
      if (r.degenerate) {
        ++report.degenerate;
        continue;
      }
      if (report.grid.empty()) report.grid = r.private_cdf.grid;
      priv.push_back(r.private_cdf.values);
      gber.push_back(r.gberan_cdf.values);
      ber.push_back(r.beran_cdf.values);
      report.empirical_censoring += r.censoring_fraction;
      report.h_mean += r.h;
      report.b_mean += r.b;
      report.floor_hits += r.private_cdf.floor_hits;
    }
    if (report.degenerate * 100 > reps) {
      throw DegenerateRunError(report.degenerate, reps);
    }
    report.replications_used = priv.size();
    const double used = static_cast<double>(priv.size());
    report.empirical_censoring /= used;
    report.h_mean /= used;
    report.b_mean /= used;
    for (double t : report.grid) {
      report.truth.push_back(true_cdf(plan.model, t, plan.x_eval));
    }
    report.private_error = mse_aggregate(priv, report.truth);
    report.gberan_error = mse_aggregate(gber, report.truth);
    report.beran_error = mse_aggregate(ber, report.truth);
    reports.push_back(std::move(report));
  }
  return reports;
}

struct RatePlan {
  ExpModel model;
  std::vector<double> alphas{0.5};
  std::vector<long long> ns{250, 500, 1000, 2000, 4000};
  double beta = 1.0;
  int p = 1;
  int replications = 100;
  std::uint64_t master_seed = 0;
  double x_eval = 0.5;
  std::optional<double> t0;
  std::optional<double> t1;
  int grid_size = 101;
  double denom_floor = 1e-3;
  bool clip_p = false;
  unsigned threads = 0;

  void validate() const {
    model.validate();
    detail::require(!alphas.empty(), "at least one alpha required");
    for (double a : alphas) detail::require(a > 0.0 && std::isfinite(a), "alpha must be > 0");
    std::vector<long long> sizes = ns;
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    detail::require(sizes.size() >= 3, "rate experiment needs >= 3 distinct sample sizes");
    detail::require(sizes.front() >= 1, "sample sizes must be >= 1");
    detail::require(sizes.back() >= 10 * sizes.front(),
                    "sample sizes must span at least one decade");
    detail::require(p == 1, "synthetic covariates are one-dimensional; p must be 1");
    detail::require(replications >= 2, "rate experiment needs >= 2 replications");
    detail::require(x_eval >= 0.0 && x_eval <= 1.0, "x_eval must lie in [0, 1]");
  }
};

struct RateRow {
  double alpha;
  long long n;
  double h;
  double b;
  double risk;     // Monte-Carlo mean of the integrated squared hazard error
  double risk_se;  // its standard error
  std::size_t degenerate;
};

struct RateReport {
  std::vector<RateRow> rows;
  double t0 = 0.0;
  double t1 = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;  // Monte-Carlo error propagated through the fit
  double fit_se = 0.0;    // residual-based OLS error
  double theoretical_slope = 0.0;
  std::uint64_t seed = 0;
  int replications = 0;
};

struct SlopeFit {
  double slope;
  double intercept;
  double slope_se;
  double fit_se;
};

/// Least-squares slope of log(risk) against log_x. `risk_se` feeds a
/// delta-method standard error for the slope. Rejects nonpositive risks.
inline SlopeFit fit_rate_slope(std::span<const double> log_x,
                               std::span<const double> risk,
                               std::span<const double> risk_se) {
  detail::require(log_x.size() == risk.size() && risk.size() == risk_se.size(),
                  "fit_rate_slope: length mismatch");
  std::vector<double> log_risk;
  for (double r : risk) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw ArgumentError("fit_rate_slope: risk must be positive and finite");
    }
    log_risk.push_back(std::log(r));
  }
  const numerics::LinearFit fit = numerics::least_squares(log_x, log_risk);
  const double mx = numerics::mean(log_x);
  double sxx = 0.0;
  for (double v : log_x) sxx += (v - mx) * (v - mx);
  double var = 0.0;
  for (std::size_t i = 0; i < log_x.size(); ++i) {
    const double c = (log_x[i] - mx) / sxx;
    const double rel = risk_se[i] / risk[i];
    var += c * c * rel * rel;
  }
  return {fit.slope, fit.intercept, std::sqrt(var), fit.slope_se};
}

/// Empirical convergence rate of the private Nelson-Aalen estimator with the
/// rate-optimal bandwidth h = (alpha^2 n)^(-1/(2 beta + p)), b = sqrt(h).
inline RateReport rate_experiment(const RatePlan& plan) {
  plan.validate();
  ExperimentPlan window_plan;
  window_plan.model = plan.model;
  window_plan.x_eval = plan.x_eval;
  window_plan.t0 = plan.t0;
  window_plan.t1 = plan.t1;
  window_plan.master_seed = plan.master_seed;
  const TimeWindow window = resolve_window(window_plan);

  const std::vector<double> grid = numerics::linspace(window.t0, window.t1, plan.grid_size);
  std::vector<double> truth;
  for (double t : grid) truth.push_back(true_hazard(plan.model, t, plan.x_eval));

  struct Cell {
    double alpha;
    long long n;
    std::size_t n_index;
  };
  std::vector<Cell> cells;
  for (double alpha : plan.alphas) {
    for (std::size_t j = 0; j < plan.ns.size(); ++j) cells.push_back({alpha, plan.ns[j], j});
  }
  const std::size_t reps = static_cast<std::size_t>(plan.replications);
  std::vector<double> risks(cells.size() * reps, 0.0);
  std::vector<char> degenerate(cells.size() * reps, 0);

  parallel_for(cells.size() * reps, plan.threads, [&](std::size_t task) {
    const Cell& cell = cells[task / reps];
    const std::size_t k = task % reps;
    const auto n_tag = static_cast<std::uint64_t>(cell.n);
    RandomStream data_rng(derive_seed(plan.master_seed, {seed_tags::kRateDataset, n_tag, k}));
    const std::vector<SurvivalRecord> data = generate(plan.model, cell.n, data_rng);
    RandomStream noise_rng(derive_seed(plan.master_seed, {seed_tags::kRateNoise, n_tag, k}));
    const std::vector<PrivateRecord> released =
        privatize(LaplaceChannel(cell.alpha), data, noise_rng);
    EstimatorConfig cfg{Bandwidths::coupled(
        optimal_bandwidth(cell.n, cell.alpha, plan.beta, plan.p))};
    cfg.t0 = window.t0;
    cfg.t1 = window.t1;
    cfg.grid_size = plan.grid_size;
    cfg.denom_floor = plan.denom_floor;
    cfg.clip_p = plan.clip_p;
    try {
      const HazardCurve curve = nelson_aalen_private(Covariate{plan.x_eval}, released, cfg);
      std::vector<double> sq(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double err = curve.values[i] - truth[i];
        sq[i] = err * err;
      }
      risks[task] = numerics::trapezoid(grid, sq);
    } catch (const EmptyNeighborhood&) {
      degenerate[task] = 1;
    }
  });

  RateReport report;
  report.t0 = window.t0;
  report.t1 = window.t1;
  report.seed = plan.master_seed;
  report.replications = plan.replications;
  report.theoretical_slope = -2.0 * plan.beta / (2.0 * plan.beta + plan.p);
  std::vector<double> log_x, risk, risk_se;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<double> used;
    std::size_t bad = 0;
    for (std::size_t k = 0; k < reps; ++k) {
      if (degenerate[c * reps + k]) {
        ++bad;
      } else {
        used.push_back(risks[c * reps + k]);
      }
    }
    if (bad * 100 > reps) throw DegenerateRunError(bad, reps);
    const double h = optimal_bandwidth(cells[c].n, cells[c].alpha, plan.beta, plan.p);
    RateRow row{cells[c].alpha, cells[c].n, h, std::sqrt(h), numerics::mean(used),
                used.size() >= 2 ? numerics::stddev(used) / std::sqrt(used.size()) : 0.0,
                bad};
    report.rows.push_back(row);
    log_x.push_back(std::log(cells[c].alpha * cells[c].alpha * cells[c].n));
    risk.push_back(row.risk);
    risk_se.push_back(row.risk_se);
  }
  const SlopeFit fit = fit_rate_slope(log_x, risk, risk_se);
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  report.slope_se = fit.slope_se;
  report.fit_se = fit.fit_se;
  return report;
}

}  // namespace ldpsurv
