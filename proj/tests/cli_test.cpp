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


// Runs the ldpsurv binary end to end through the shell.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "ldpsurv/io.hpp"
#include "oracle.hpp"

#ifndef LDPSURV_CLI_PATH
#error "LDPSURV_CLI_PATH must name the command-line binary"
#endif

namespace ldpsurv {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ldpsurv_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(LDPSURV_CLI_PATH) + " " + args + " >" +
                            path("stdout.txt") + " 2>" + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
  }

  static io::CsvTable table(const std::string& file) {
    std::ifstream in(file);
    return io::read_csv(in);
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name), std::ios::binary) << text;
  }

  fs::path dir_;
};

TEST_F(CliTest, GenerateRejectsEmptySample) {
  EXPECT_EQ(run("generate --n 0 --seed 1 --out " + path("d.csv")), 2);
  EXPECT_EQ(run("generate --n 10 --out " + path("d.csv")), 2);
  EXPECT_EQ(run("generate --n 10 --seed 1 --lambda-t 1,1"), 2);
}

TEST_F(CliTest, GenerateIsByteReproducible) {
  ASSERT_EQ(run("generate --n 500 --seed 7 --out " + path("a.csv")), 0);
  ASSERT_EQ(run("generate --n 500 --seed 7 --out " + path("b.csv")), 0);
  ASSERT_EQ(run("generate --n 500 --seed 8 --out " + path("c.csv")), 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));

  const auto data = io::survival_records(table(path("a.csv")));
  ASSERT_EQ(data.size(), 500u);
  double events = 0;
  for (const auto& r : data) events += r.delta;
  EXPECT_GE(events / 500, 0.45);
  EXPECT_LE(events / 500, 0.55);
}

TEST_F(CliTest, GenerateWritesModelDescriptor) {
  ASSERT_EQ(run("generate --n 5 --seed 1 --lambda-c 3,3,3 --out " + path("d.csv") +
                " --model-out " + path("m.json")),
            0);
  const auto j = nlohmann::json::parse(slurp(path("m.json")));
  EXPECT_EQ(io::model_from_json(j).lambda_c[1], 3.0);
}

TEST_F(CliTest, Privatize) {
  ASSERT_EQ(run("generate --n 2000 --seed 3 --out " + path("raw.csv")), 0);
  EXPECT_EQ(run("privatize --in " + path("raw.csv") + " --seed 4"), 2);
  EXPECT_EQ(run("privatize --in " + path("missing.csv") + " --alpha 1 --seed 4"), 2);
  EXPECT_EQ(run("privatize --in " + path("raw.csv") + " --alpha -1 --seed 4"), 2);
  ASSERT_EQ(run("privatize --in " + path("raw.csv") + " --alpha 0.5 --seed 4 --out " +
                path("priv.csv")),
            0);
  const auto raw = io::survival_records(table(path("raw.csv")));
  const io::CsvTable priv_table = table(path("priv.csv"));
  EXPECT_LT(priv_table.column("delta"), 0);
  const auto priv = io::private_records(priv_table);
  ASSERT_EQ(priv.size(), raw.size());
  double mz = 0, md = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    EXPECT_EQ(priv[i].y, raw[i].y);
    EXPECT_EQ(priv[i].x, raw[i].x);
    mz += priv[i].z;
    md += raw[i].delta;
  }
  const double n = static_cast<double>(raw.size());
  EXPECT_NEAR(mz / n, md / n, 4 * std::sqrt(2 / (0.25 * n)));

  std::string bad = "y,x1\n0.1,0.5\n";
  write("bad.csv", bad);
  EXPECT_EQ(run("privatize --in " + path("bad.csv") + " --alpha 1 --seed 4"), 3);
}

TEST_F(CliTest, EstimateRequiresMatchingColumns) {
  ASSERT_EQ(run("generate --n 200 --seed 3 --out " + path("raw.csv")), 0);
  EXPECT_EQ(run("estimate --in " + path("raw.csv") + " --estimator private"), 2);
  EXPECT_EQ(run("estimate --in " + path("raw.csv") + " --estimator nope"), 2);
  EXPECT_EQ(run("estimate --in " + path("raw.csv") + " --estimator beran --target hazard"), 2);
  EXPECT_EQ(run("estimate --in " + path("raw.csv") + " --estimator beran --out " +
                path("beran.csv")),
            0);
  EXPECT_EQ(table(path("beran.csv")).rows.size(), 101u);
  // Empty neighborhood is a data error.
  EXPECT_EQ(run("estimate --in " + path("raw.csv") + " --estimator gberan --x-eval 5"), 3);
}

TEST_F(CliTest, ZeroNoisePrivateMatchesGeneralizedBeran) {
  ASSERT_EQ(run("generate --n 300 --seed 11 --out " + path("raw.csv")), 0);
  std::string text = slurp(path("raw.csv"));
  ASSERT_EQ(text.rfind("y,delta,", 0), 0u);
  write("zero.csv", "y,z," + text.substr(8));
  for (const std::string target : {"cdf", "hazard"}) {
    ASSERT_EQ(run("estimate --in " + path("zero.csv") + " --estimator private --target " +
                  target + " --out " + path("p.csv")),
              0);
    ASSERT_EQ(run("estimate --in " + path("raw.csv") + " --estimator gberan --target " +
                  target + " --out " + path("g.csv")),
              0);
    EXPECT_EQ(slurp(path("p.csv")), slurp(path("g.csv"))) << target;
  }
}

TEST_F(CliTest, HandDatasetMatchesOracle) {
  write("raw.csv",
        "y,delta,x1\n0.12,1,0.48\n0.25,0,0.55\n0.31,1,0.62\n0.44,1,0.41\n0.58,0,0.50\n"
        "0.73,1,0.39\n");
  write("priv.csv",
        "y,z,x1\n0.12,1.8,0.48\n0.25,-1.3,0.55\n0.31,1.2,0.62\n0.44,3.1,0.41\n"
        "0.58,-0.6,0.50\n0.73,1.4,0.39\n");
  const std::string common =
      " --x-eval 0.5 --h 0.15 --b 0.3 --t0 0 --t1 0.8 --grid 17 --target hazard --out ";
  ASSERT_EQ(run("estimate --in " + path("raw.csv") + " --estimator gberan" + common +
                path("g.csv")),
            0);
  ASSERT_EQ(run("estimate --in " + path("priv.csv") + " --estimator private" + common +
                path("p.csv")),
            0);

  std::vector<oracle::Row> clean, priv;
  const double ys[] = {0.12, 0.25, 0.31, 0.44, 0.58, 0.73};
  const int ds[] = {1, 0, 1, 1, 0, 1};
  const double zs[] = {1.8, -1.3, 1.2, 3.1, -0.6, 1.4};
  const double xs[] = {0.48, 0.55, 0.62, 0.41, 0.50, 0.39};
  for (int i = 0; i < 6; ++i) {
    clean.push_back({ys[i], double(ds[i]), ds[i], xs[i]});
    priv.push_back({ys[i], zs[i], ds[i], xs[i]});
  }
  const oracle::Setup setup{0.15, 0.3, 1e-3, false};
  const io::CsvTable g = table(path("g.csv"));
  const io::CsvTable p = table(path("p.csv"));
  ASSERT_EQ(g.rows.size(), 17u);
  for (std::size_t i = 0; i < g.rows.size(); ++i) {
    const double t = std::stod(g.rows[i][0]);
    EXPECT_NEAR(std::stod(g.rows[i][1]), oracle::hazard(t, 0.5, clean, setup), 1e-12);
    EXPECT_NEAR(std::stod(p.rows[i][1]), oracle::hazard(t, 0.5, priv, setup), 1e-12);
  }
}

TEST_F(CliTest, Audit) {
  ASSERT_EQ(run("audit --alpha 0.3 --out " + path("a.json")), 0);
  const auto j = nlohmann::json::parse(slurp(path("a.json")));
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_LE(j.at("max_ratio").get<double>(), std::exp(0.3) + 1e-9);
  EXPECT_EQ(j.at("renyi").size(), 4u);
  EXPECT_EQ(run("audit --alpha -0.3"), 2);
  EXPECT_EQ(run("audit"), 2);
  EXPECT_EQ(run("audit --alpha 1 --gamma 0.5"), 2);
}

TEST_F(CliTest, MseSingleReplication) {
  ASSERT_EQ(run("mse --n 200 --reps 1 --alpha 0.4 --grid 21 --seed 5 --svg --out " +
                path("m")),
            0);
  const io::CsvTable csv = table(path("m_alpha0.4.csv"));
  ASSERT_EQ(csv.rows.size(), 21u);
  const int var = csv.column("var_private");
  ASSERT_GE(var, 0);
  for (const auto& row : csv.rows) EXPECT_EQ(std::stod(row[var]), 0.0);
  const auto meta = nlohmann::json::parse(slurp(path("m_alpha0.4.json")));
  EXPECT_EQ(meta.at("replications_used").get<int>(), 1);
  EXPECT_NE(slurp(path("m_alpha0.4.svg")).find("</svg>"), std::string::npos);
}

TEST_F(CliTest, MseIsThreadIndependent) {
  const std::string args = "mse --n 150 --reps 4 --alpha 0.3,0.6 --grid 21 --seed 9 --out ";
  ASSERT_EQ(run(args + path("one") + " --threads 1"), 0);
  ASSERT_EQ(run(args + path("four") + " --threads 4"), 0);
  for (const std::string suffix : {"_alpha0.3.csv", "_alpha0.6.csv", "_alpha0.3.json"}) {
    EXPECT_EQ(slurp(path("one" + suffix)), slurp(path("four" + suffix))) << suffix;
  }
}

TEST_F(CliTest, MseDegenerateRunFails) {
  EXPECT_EQ(run("mse --n 5 --reps 10 --alpha 0.3 --h 0.0001 --t0 0.1 --t1 1 --seed 1 --out " +
                path("m")),
            4);
}

TEST_F(CliTest, RateWritesSummary) {
  ASSERT_EQ(run("rate --ns 50,150,500 --reps 3 --grid 21 --seed 2 --out " + path("r")), 0);
  EXPECT_EQ(table(path("r.csv")).rows.size(), 3u);
  const auto j = nlohmann::json::parse(slurp(path("r.json")));
  EXPECT_TRUE(j.contains("slope"));
  EXPECT_EQ(run("rate --ns 50,100 --reps 3 --seed 2 --out " + path("r")), 2);
}

TEST_F(CliTest, UnknownSubcommandIsUsageError) {
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("--help"), 0);
}

}  // namespace
}  // namespace ldpsurv
