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


// Random small datasets shared by the estimator unit tests and the
// acceptance suite.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "ldpsurv/estimators.hpp"
#include "ldpsurv/records.hpp"
#include "oracle.hpp"

namespace fixtures {

struct SmallCase {
  std::vector<ldpsurv::SurvivalRecord> raw;
  std::vector<ldpsurv::PrivateRecord> released;
  std::vector<oracle::Row> clean_rows;
  std::vector<oracle::Row> private_rows;
  double x;
  ldpsurv::EstimatorConfig cfg{ldpsurv::Bandwidths(0.3, 0.5)};
  oracle::Setup setup{0.3, 0.5};
};

// n in [1, max_n]; about a third of the cases round Y to 0.1 to create ties.
inline SmallCase random_small_case(std::mt19937_64& gen, int max_n, bool clip) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  SmallCase c;
  const int n = 1 + static_cast<int>(gen() % static_cast<unsigned>(max_n));
  const bool ties = gen() % 3 == 0;
  const double alpha = 0.3 + 2.0 * unif(gen);
  for (int i = 0; i < n; ++i) {
    double y = 1.2 * unif(gen);
    if (ties) y = std::round(y * 10.0) / 10.0;
    const int delta = unif(gen) < 0.6 ? 1 : 0;
    const double x = unif(gen);
    const double noise = (expo(gen) - expo(gen)) / alpha;
    c.raw.push_back({y, delta, {x}});
    c.released.push_back({y, delta + noise, {x}});
    c.clean_rows.push_back({y, static_cast<double>(delta), delta, x});
    c.private_rows.push_back({y, delta + noise, delta, x});
  }
  c.x = c.raw[gen() % c.raw.size()].x[0];
  if (gen() % 4 == 0) c.x = unif(gen);  // may leave the neighborhood empty
  const double h = 0.1 + 0.6 * unif(gen);
  const double b = 0.1 + 0.8 * unif(gen);
  c.cfg = ldpsurv::EstimatorConfig{ldpsurv::Bandwidths(h, b)};
  c.cfg.t0 = 0.05 * unif(gen);
  c.cfg.t1 = 0.8 + 0.5 * unif(gen);
  c.cfg.grid_size = 23;
  c.cfg.denom_floor = 0.05;  // large enough to bind on some cases
  c.cfg.clip_p = clip;
  c.setup = {h, b, 0.05, clip};
  return c;
}

// Largest absolute gap between every library estimator and its brute-force
// counterpart on `c`. Infinity when exactly one side reports an empty
// neighborhood.
inline double oracle_discrepancy(const SmallCase& c) {
  using namespace ldpsurv;
  const Covariate x{c.x};
  const bool empty = oracle::empty_neighborhood(c.x, c.clean_rows, c.setup.h);
  if (empty) {
    try {
      nelson_aalen_private(x, c.released, c.cfg);
    } catch (const EmptyNeighborhood&) {
      try {
        beran_curve(x, c.raw, c.cfg);
      } catch (const EmptyNeighborhood&) {
        return 0.0;
      }
    }
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  auto track = [&worst](double a, double b) { worst = std::max(worst, std::abs(a - b)); };

  const std::vector<double> grid = c.cfg.grid();
  const Curve priv = nelson_aalen_private(x, c.released, c.cfg);
  const Curve clean = nelson_aalen_clean(x, c.raw, c.cfg);
  const Curve priv_cdf = dist_from_hazard(priv);
  const Curve ber = beran_curve(x, c.raw, c.cfg);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double t = grid[g];
    const double lam_p = oracle::hazard(t, c.x, c.private_rows, c.setup);
    track(priv.values[g], lam_p);
    track(clean.values[g], oracle::hazard(t, c.x, c.clean_rows, c.setup));
    track(priv_cdf.values[g], 1.0 - std::exp(-lam_p));
    const double f = oracle::beran(t, c.x, c.clean_rows, c.setup);
    track(ber.values[g], f);
    track(beran(t, x, c.raw, c.cfg), f);
    track(cond_ecdf(t, x, c.raw, c.cfg), oracle::ecdf(t, c.x, c.clean_rows, c.setup.h, false));
    track(cond_ecdf_left(t, x, c.raw, c.cfg),
          oracle::ecdf(t, c.x, c.clean_rows, c.setup.h, true));
  }
  for (std::size_t i = 0; i < c.raw.size(); ++i) {
    const double y = c.raw[i].y;
    const Covariate xi = c.raw[i].x;
    track(phat(y, xi, c.released, c.cfg),
          oracle::smoothed(y, xi[0], c.private_rows, c.setup));
    track(pcheck(y, xi, c.raw, c.cfg), oracle::smoothed(y, xi[0], c.clean_rows, c.setup));
    track(cond_ecdf(y, x, c.raw, c.cfg), oracle::ecdf(y, c.x, c.clean_rows, c.setup.h, false));
    track(cond_ecdf_left(y, x, c.raw, c.cfg),
          oracle::ecdf(y, c.x, c.clean_rows, c.setup.h, true));
  }
  return worst;
}

}  // namespace fixtures
