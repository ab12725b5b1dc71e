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


// Simulates one dataset, privatizes its failure indicators and prints the
// private, generalized Beran and Beran estimates of F(t | x = 0.5) next to
// the true conditional CDF.

#include <cstdio>

#include "ldpsurv/ldpsurv.hpp"

int main() {
  using namespace ldpsurv;
  const ExpModel model;  // lambda_T = lambda_C = (1, 1, 1): 50% censoring
  RandomStream data_rng(2024);
  const auto data = generate(model, 500, data_rng);

  RandomStream noise_rng(7);
  const auto released = privatize(LaplaceChannel(0.4), data, noise_rng);

  EstimatorConfig cfg{Bandwidths::coupled(bandwidth_plugin(data, 5.0))};
  cfg.t0 = 0.02;
  cfg.t1 = 0.6;
  cfg.grid_size = 7;

  const Covariate x{0.5};
  const Curve priv = dist_from_hazard(nelson_aalen_private(x, released, cfg));
  const Curve gberan = dist_from_hazard(nelson_aalen_clean(x, data, cfg));
  const Curve ber = beran_curve(x, data, cfg);

  std::printf("h = %.4f, b = %.4f\n", cfg.bandwidths.h, cfg.bandwidths.b);
  std::printf("%8s %10s %10s %10s %10s\n", "t", "truth", "private", "gberan", "beran");
  for (std::size_t i = 0; i < priv.grid.size(); ++i) {
    const double t = priv.grid[i];
    std::printf("%8.3f %10.4f %10.4f %10.4f %10.4f\n", t, true_cdf(model, t, 0.5),
                priv.values[i], gberan.values[i], ber.values[i]);
  }
  return 0;
}
