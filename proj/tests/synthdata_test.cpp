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


#include "ldpsurv/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "ldpsurv/numerics.hpp"

namespace ldpsurv {
namespace {

ExpModel model(std::array<double, 3> t, std::array<double, 3> c) {
  ExpModel m;
  m.lambda_t = t;
  m.lambda_c = c;
  return m;
}

double delta_mean(const std::vector<SurvivalRecord>& data) {
  double s = 0.0;
  for (const auto& r : data) s += r.delta;
  return s / data.size();
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size(); ++i) r[order[i]] = static_cast<double>(i);
  return r;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = numerics::mean(a), mb = numerics::mean(b);
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

TEST(CensoringProportionTest, Examples) {
  EXPECT_DOUBLE_EQ(censoring_proportion(ExpModel{}, 0.3), 0.5);
  EXPECT_DOUBLE_EQ(censoring_proportion(model({1, 1, 1}, {3, 3, 3}), 0.7), 0.25);
  EXPECT_DOUBLE_EQ(censoring_proportion(model({3, 3, 3}, {1, 1, 1}), 0.7), 0.75);
  // Rates 1 + x and 2 at x = 0.5.
  EXPECT_DOUBLE_EQ(censoring_proportion(model({1, 1, 0}, {2, 0, 0}), 0.5), 1.5 / 3.5);
  EXPECT_THROW(censoring_proportion(ExpModel{}, 1.5), ArgumentError);
}

TEST(GenerateTest, EqualRatesGiveHalfFailures) {
  RandomStream rng(42);
  const auto data = generate(ExpModel{}, 100000, rng);
  ASSERT_EQ(data.size(), 100000u);
  EXPECT_NEAR(delta_mean(data), 0.5, 0.01);
  for (const auto& r : data) {
    ASSERT_EQ(r.x.size(), 1u);
    ASSERT_GT(r.x[0], 0.0);
    ASSERT_LT(r.x[0], 1.0);
    ASSERT_GT(r.y, 0.0);
    ASSERT_TRUE(r.delta == 0 || r.delta == 1);
  }
}

TEST(GenerateTest, HeavyCensoringGivesNoFailures) {
  RandomStream rng(1);
  const auto data = generate(model({1, 1, 1}, {1e9, 0, 0}), 1000, rng);
  EXPECT_LE(delta_mean(data), 0.001);
}

TEST(GenerateTest, Deterministic) {
  RandomStream a(7), b(7), c(8);
  const auto da = generate(ExpModel{}, 500, a);
  const auto db = generate(ExpModel{}, 500, b);
  const auto dc = generate(ExpModel{}, 500, c);
  ASSERT_EQ(da.size(), db.size());
  bool differs = false;
  for (std::size_t i = 0; i < da.size(); ++i) {
    EXPECT_EQ(da[i].y, db[i].y);
    EXPECT_EQ(da[i].delta, db[i].delta);
    EXPECT_EQ(da[i].x, db[i].x);
    differs = differs || da[i].y != dc[i].y;
  }
  EXPECT_TRUE(differs);
}

TEST(GenerateTest, RejectsBadInput) {
  RandomStream rng(1);
  EXPECT_THROW(generate(ExpModel{}, 0, rng), ArgumentError);
  EXPECT_THROW(generate(model({1, -2, 0}, {1, 1, 1}), 10, rng), ArgumentError);
  EXPECT_THROW(model({0, 0, 0}, {1, 1, 1}).validate(), ArgumentError);
  EXPECT_NO_THROW(model({0.1, 0, 0}, {1, 1, 1}).validate());
}

TEST(GenerateTest, LatentTimesAreConsistent) {
  RandomStream rng(5);
  const LatentSample s = generate_latent(ExpModel{}, 2000, rng);
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    const double t = s.failure_times[i], c = s.censoring_times[i];
    EXPECT_EQ(s.records[i].y, std::min(t, c));
    EXPECT_EQ(s.records[i].delta, t <= c ? 1 : 0);
  }
}

TEST(GenerateTest, MarginalFailureTimeMatchesModel) {
  // Conditional on a slice around x = 0.5 the failure time is close to
  // Exp(1.75); check the mean.
  RandomStream rng(11);
  const LatentSample s = generate_latent(ExpModel{}, 200000, rng);
  std::vector<double> t;
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    if (std::abs(s.records[i].x[0] - 0.5) < 0.01) t.push_back(s.failure_times[i]);
  }
  const double se = (1 / 1.75) / std::sqrt(static_cast<double>(t.size()));
  EXPECT_NEAR(numerics::mean(t), 1 / 1.75, 4 * se);
}

TEST(GenerateTest, ConditionalIndependenceInSlice) {
  RandomStream rng(21);
  const LatentSample s = generate_latent(ExpModel{}, 1000000, rng);
  std::vector<double> t, c;
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    if (std::abs(s.records[i].x[0] - 0.5) <= 0.05) {
      t.push_back(s.failure_times[i]);
      c.push_back(s.censoring_times[i]);
    }
  }
  ASSERT_GT(t.size(), 90000u);
  EXPECT_LT(std::abs(pearson(ranks(t), ranks(c))), 0.02);
}

TEST(GenerateTest, SliceCensoringMatchesModel) {
  for (const ExpModel& m : {ExpModel{}, model({1, 1, 1}, {3, 3, 3}),
                            model({3, 3, 3}, {1, 1, 1}), model({1, 2, 0}, {2, 0, 1})}) {
    RandomStream rng(31);
    const auto data = generate(m, 100000, rng);
    for (double x0 : {0.2, 0.5, 0.8}) {
      double events = 0, count = 0, expected = 0;
      for (const auto& r : data) {
        if (std::abs(r.x[0] - x0) <= 0.05) {
          events += r.delta;
          count += 1;
          expected += censoring_proportion(m, r.x[0]);
        }
      }
      // Average of the model probability over the slice members.
      const double p = expected / count;
      const double se = std::sqrt(p * (1 - p) / count);
      EXPECT_NEAR(events / count, p, 3 * se) << x0;
    }
  }
}

TEST(TruthTest, Examples) {
  EXPECT_EQ(true_cdf(ExpModel{}, 0.0, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(true_cdf(ExpModel{}, std::log(2.0) / 1.75, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(true_hazard(ExpModel{}, 2.0, 0.5), 3.5);
  EXPECT_DOUBLE_EQ(true_cdf(ExpModel{}, 1.3, 0.2), 1 - std::exp(-true_hazard(ExpModel{}, 1.3, 0.2)));
  EXPECT_THROW(true_cdf(ExpModel{}, -1.0, 0.5), ArgumentError);
  EXPECT_THROW(true_hazard(ExpModel{}, -1.0, 0.5), ArgumentError);
}

}  // namespace
}  // namespace ldpsurv
