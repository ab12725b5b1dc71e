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


// Command-line front end: generate, privatize, estimate, audit, mse, rate.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ldpsurv/io.hpp"
#include "ldpsurv/ldpsurv.hpp"
#include "ldpsurv/svg.hpp"

namespace {

using namespace ldpsurv;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitThreshold = 4;

struct ThresholdFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::array<double, 3> parse_triple(const std::vector<double>& values, const char* flag) {
  if (values.size() != 3) {
    throw ArgumentError(std::string(flag) + " expects three comma-separated values");
  }
  return {values[0], values[1], values[2]};
}

void check_output_path(const std::string& path) {
  if (path.empty() || path == "-") return;
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent)) {
    throw ArgumentError("output directory does not exist: " + parent.string());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw DataError("write to " + path + " failed");
}

io::CsvTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return io::read_csv(in);
}

std::string alpha_tag(double alpha) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%g", alpha);
  return buffer;
}

struct ModelFlags {
  std::vector<double> lambda_t{1.0, 1.0, 1.0};
  std::vector<double> lambda_c{1.0, 1.0, 1.0};

  void add(CLI::App* cmd) {
    cmd->add_option("--lambda-t", lambda_t, "failure-rate coefficients a,b,c")
        ->delimiter(',')->expected(3);
    cmd->add_option("--lambda-c", lambda_c, "censoring-rate coefficients a,b,c")
        ->delimiter(',')->expected(3);
  }

  ExpModel model() const {
    ExpModel m{parse_triple(lambda_t, "--lambda-t"), parse_triple(lambda_c, "--lambda-c")};
    m.validate();
    return m;
  }
};

// generate ---------------------------------------------------------------

struct GenerateArgs {
  ModelFlags model;
  long long n = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string model_out;
};

int run_generate(const GenerateArgs& args) {
  detail::require(args.n >= 1, "--n must be >= 1");
  check_output_path(args.out);
  check_output_path(args.model_out);
  const ExpModel model = args.model.model();
  RandomStream rng(args.seed);
  std::ostringstream csv;
  io::write_survival_csv(csv, generate(model, args.n, rng));
  write_text(args.out, csv.str());
  if (!args.model_out.empty()) write_text(args.model_out, io::dump_json(io::to_json(model)));
  return 0;
}

// privatize --------------------------------------------------------------

struct PrivatizeArgs {
  std::string in;
  std::optional<double> alpha;
  std::uint64_t seed = 0;
  std::string out;
};

int run_privatize(const PrivatizeArgs& args) {
  if (!args.alpha) throw ArgumentError("--alpha is required");
  const LaplaceChannel channel(*args.alpha);
  check_output_path(args.out);
  const std::vector<SurvivalRecord> data = io::survival_records(load_table(args.in));
  RandomStream rng(args.seed);
  std::ostringstream csv;
  io::write_private_csv(csv, privatize(channel, data, rng));
  write_text(args.out, csv.str());
  return 0;
}

// estimate ---------------------------------------------------------------

struct EstimateArgs {
  std::string in;
  std::string estimator = "private";
  std::string target = "cdf";
  std::vector<double> x_eval{0.5};
  std::optional<double> t0, t1, h, b;
  int grid = 101;
  double multiplier = 5.0;
  double denom_floor = 1e-3;
  bool clip_p = false;
  std::string out;
};

template <class Record>
EstimatorConfig estimate_config(const EstimateArgs& args, const std::vector<Record>& data) {
  detail::require(!data.empty(), "input dataset is empty");
  const double h = args.h ? *args.h : bandwidth_plugin(data, args.multiplier);
  EstimatorConfig cfg{args.b ? Bandwidths(h, *args.b) : Bandwidths::coupled(h)};
  cfg.kernel_x = KernelSpec::uniform(static_cast<int>(data.front().x.size()));
  std::vector<double> ys;
  for (const Record& r : data) ys.push_back(r.y);
  cfg.t0 = args.t0 ? *args.t0 : numerics::quantile(ys, 0.05);
  cfg.t1 = args.t1 ? *args.t1 : numerics::quantile(ys, 0.9);
  cfg.grid_size = args.grid;
  cfg.denom_floor = args.denom_floor;
  cfg.clip_p = args.clip_p;
  cfg.validate();
  if (!rate_coupling_holds(cfg.bandwidths, cfg.kernel_x.dimension)) {
    std::cerr << "warning: h exceeds b^((1+p)/p); the rate coupling does not hold\n";
  }
  return cfg;
}

int run_estimate(const EstimateArgs& args) {
  check_output_path(args.out);
  if (args.target != "cdf" && args.target != "hazard") {
    throw ArgumentError("--target must be cdf or hazard");
  }
  const io::CsvTable table = load_table(args.in);
  Curve curve;
  try {
    if (args.estimator == "private") {
      if (table.column("z") < 0) {
        throw ArgumentError("estimator 'private' needs a privatized file with a z column");
      }
      const auto data = io::private_records(table);
      curve = nelson_aalen_private(args.x_eval, data, estimate_config(args, data));
    } else {
      if (table.column("delta") < 0) {
        throw ArgumentError("estimator '" + args.estimator + "' needs a delta column");
      }
      const auto data = io::survival_records(table);
      const EstimatorConfig cfg = estimate_config(args, data);
      if (args.estimator == "beran") {
        if (args.target == "hazard") {
          throw ArgumentError("estimator 'beran' only supports --target cdf");
        }
        curve = beran_curve(args.x_eval, data, cfg);
      } else {
        curve = nelson_aalen_clean(args.x_eval, data, cfg);
      }
    }
  } catch (const EmptyNeighborhood& e) {
    std::ostringstream where;
    for (double v : args.x_eval) where << ' ' << v;
    throw DataError(std::string(e.what()) + " at x =" + where.str());
  }
  if (args.estimator != "beran" && args.target == "cdf") curve = dist_from_hazard(curve);
  if (curve.floor_hits > 0) {
    std::cerr << "warning: denominator floor hit " << curve.floor_hits << " time(s)\n";
  }
  std::ostringstream csv;
  io::write_curve_csv(csv, curve);
  write_text(args.out, csv.str());
  return 0;
}

// audit ------------------------------------------------------------------

struct AuditArgs {
  std::optional<double> alpha;
  std::vector<double> gammas;
  std::string out;
};

int run_audit(const AuditArgs& args) {
  if (!args.alpha) throw ArgumentError("--alpha is required");
  const LaplaceChannel channel(*args.alpha);
  check_output_path(args.out);
  for (double g : args.gammas) detail::require(g > 1.0, "--gamma values must be > 1");
  const AuditReport report = audit_channel(channel, args.gammas, default_audit_grid());
  write_text(args.out, io::dump_json(io::to_json(report)));
  if (!report.pass) throw ThresholdFailure("privacy audit failed");
  return 0;
}

// mse --------------------------------------------------------------------

struct MseArgs {
  ModelFlags model;
  long long n = 500;
  int reps = 300;
  std::vector<double> alphas{0.2, 0.3, 0.4};
  double x_eval = 0.5;
  std::optional<double> t0, t1, h;
  int grid = 101;
  double multiplier = 5.0;
  double denom_floor = 1e-3;
  bool clip_p = false;
  bool svg = false;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  std::string out = "mse";
};

int run_mse(const MseArgs& args) {
  ExperimentPlan plan;
  plan.model = args.model.model();
  plan.n = args.n;
  plan.replications = args.reps;
  plan.alphas = args.alphas;
  plan.x_eval = args.x_eval;
  plan.t0 = args.t0;
  plan.t1 = args.t1;
  plan.grid_size = args.grid;
  plan.bandwidth_rule = args.h ? BandwidthRule::fixed(*args.h)
                               : BandwidthRule::plug_in(args.multiplier);
  plan.master_seed = args.seed;
  plan.denom_floor = args.denom_floor;
  plan.clip_p = args.clip_p;
  plan.threads = args.threads;
  plan.validate();
  check_output_path(args.out);

  const TimeWindow window = resolve_window(plan);
  plan.t0 = window.t0;
  plan.t1 = window.t1;
  std::vector<MseReport> reports;
  try {
    reports = run_mse_experiment(plan);
  } catch (const DegenerateRunError& e) {
    throw ThresholdFailure(e.what());
  }
  for (const MseReport& report : reports) {
    const std::string stem = args.out + "_alpha" + alpha_tag(report.alpha);
    std::ostringstream csv;
    io::write_mse_csv(csv, report);
    write_text(stem + ".csv", csv.str());
    write_text(stem + ".json", io::dump_json(io::mse_metadata(plan, window, report)));
    if (args.svg) write_text(stem + ".svg", svg::mse_chart(report));
    std::cerr << "alpha=" << report.alpha << " empirical censoring="
              << report.empirical_censoring << " -> " << stem << ".csv\n";
  }
  return 0;
}

// rate -------------------------------------------------------------------

struct RateArgs {
  ModelFlags model;
  std::vector<double> alphas{0.5};
  std::vector<long long> ns{250, 500, 1000, 2000, 4000};
  double beta = 1.0;
  int p = 1;
  int reps = 100;
  double x_eval = 0.5;
  std::optional<double> t0, t1;
  int grid = 101;
  double denom_floor = 1e-3;
  bool clip_p = false;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  std::string out = "rate";
};

int run_rate(const RateArgs& args) {
  RatePlan plan;
  plan.model = args.model.model();
  plan.alphas = args.alphas;
  plan.ns = args.ns;
  plan.beta = args.beta;
  plan.p = args.p;
  plan.replications = args.reps;
  plan.master_seed = args.seed;
  plan.x_eval = args.x_eval;
  plan.t0 = args.t0;
  plan.t1 = args.t1;
  plan.grid_size = args.grid;
  plan.denom_floor = args.denom_floor;
  plan.clip_p = args.clip_p;
  plan.threads = args.threads;
  check_output_path(args.out);
  RateReport report;
  try {
    report = rate_experiment(plan);
  } catch (const DegenerateRunError& e) {
    throw ThresholdFailure(e.what());
  }
  std::ostringstream csv;
  io::write_rate_csv(csv, report);
  write_text(args.out + ".csv", csv.str());
  write_text(args.out + ".json", io::dump_json(io::rate_summary(plan, report)));
  std::cerr << "slope=" << report.slope << " (theory " << report.theoretical_slope
            << ", se " << report.slope_se << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally private conditional survival estimation"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "simulate (y, delta, x) records");
  gen.model.add(generate_cmd);
  generate_cmd->add_option("--n", gen.n, "sample size")->required();
  generate_cmd->add_option("--seed", gen.seed, "master seed")->required();
  generate_cmd->add_option("--out", gen.out, "output CSV (default stdout)");
  generate_cmd->add_option("--model-out", gen.model_out, "write the model descriptor JSON");

  PrivatizeArgs priv;
  auto* privatize_cmd = app.add_subcommand("privatize", "replace delta by delta + Laplace noise");
  privatize_cmd->add_option("--in", priv.in, "raw CSV")->required()->check(CLI::ExistingFile);
  privatize_cmd->add_option("--alpha", priv.alpha, "privacy level");
  privatize_cmd->add_option("--seed", priv.seed, "noise seed")->required();
  privatize_cmd->add_option("--out", priv.out, "output CSV (default stdout)");

  EstimateArgs est;
  auto* estimate_cmd = app.add_subcommand("estimate", "conditional CDF or hazard curve at x");
  estimate_cmd->add_option("--in", est.in, "input CSV")->required()->check(CLI::ExistingFile);
  estimate_cmd->add_option("--estimator", est.estimator)
      ->check(CLI::IsMember({"private", "gberan", "beran"}));
  estimate_cmd->add_option("--target", est.target, "cdf or hazard");
  estimate_cmd->add_option("--x-eval", est.x_eval, "covariate position")->delimiter(',');
  estimate_cmd->add_option("--t0", est.t0);
  estimate_cmd->add_option("--t1", est.t1);
  estimate_cmd->add_option("--grid", est.grid);
  estimate_cmd->add_option("--h", est.h, "covariate bandwidth (default: plug-in)");
  estimate_cmd->add_option("--b", est.b, "joint bandwidth (default: sqrt(h))");
  estimate_cmd->add_option("--bandwidth-multiplier", est.multiplier);
  estimate_cmd->add_option("--denom-floor", est.denom_floor);
  estimate_cmd->add_flag("--clip-p", est.clip_p, "clamp the conditional probability to [0,1]");
  estimate_cmd->add_option("--out", est.out, "output CSV (default stdout)");

  AuditArgs aud;
  auto* audit_cmd = app.add_subcommand("audit", "numerical LDP and Renyi audit of the channel");
  audit_cmd->add_option("--alpha", aud.alpha, "privacy level");
  audit_cmd->add_option("--gamma", aud.gammas, "Renyi orders")->delimiter(',');
  audit_cmd->add_option("--out", aud.out, "output JSON (default stdout)");

  MseArgs mse;
  auto* mse_cmd = app.add_subcommand("mse", "Monte-Carlo MSE comparison of the estimators");
  mse.model.add(mse_cmd);
  mse_cmd->add_option("--n", mse.n);
  mse_cmd->add_option("--reps", mse.reps);
  mse_cmd->add_option("--alpha", mse.alphas)->delimiter(',');
  mse_cmd->add_option("--x-eval", mse.x_eval);
  mse_cmd->add_option("--t0", mse.t0);
  mse_cmd->add_option("--t1", mse.t1);
  mse_cmd->add_option("--grid", mse.grid);
  mse_cmd->add_option("--h", mse.h, "fixed bandwidth (default: plug-in)");
  mse_cmd->add_option("--bandwidth-multiplier", mse.multiplier);
  mse_cmd->add_option("--denom-floor", mse.denom_floor);
  mse_cmd->add_flag("--clip-p", mse.clip_p);
  mse_cmd->add_flag("--svg", mse.svg, "also write an SVG plot per alpha");
  mse_cmd->add_option("--threads", mse.threads, "worker threads (0: all cores)");
  mse_cmd->add_option("--seed", mse.seed)->required();
  mse_cmd->add_option("--out", mse.out, "output path prefix");

  RateArgs rate;
  auto* rate_cmd = app.add_subcommand("rate", "empirical convergence-rate experiment");
  rate.model.add(rate_cmd);
  rate_cmd->add_option("--alpha", rate.alphas)->delimiter(',');
  rate_cmd->add_option("--ns", rate.ns)->delimiter(',');
  rate_cmd->add_option("--beta", rate.beta);
  rate_cmd->add_option("--p", rate.p);
  rate_cmd->add_option("--reps", rate.reps);
  rate_cmd->add_option("--x-eval", rate.x_eval);
  rate_cmd->add_option("--t0", rate.t0);
  rate_cmd->add_option("--t1", rate.t1);
  rate_cmd->add_option("--grid", rate.grid);
  rate_cmd->add_option("--denom-floor", rate.denom_floor);
  rate_cmd->add_flag("--clip-p", rate.clip_p);
  rate_cmd->add_option("--threads", rate.threads);
  rate_cmd->add_option("--seed", rate.seed)->required();
  rate_cmd->add_option("--out", rate.out, "output path prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (generate_cmd->parsed()) return run_generate(gen);
    if (privatize_cmd->parsed()) return run_privatize(priv);
    if (estimate_cmd->parsed()) return run_estimate(est);
    if (audit_cmd->parsed()) return run_audit(aud);
    if (mse_cmd->parsed()) return run_mse(mse);
    if (rate_cmd->parsed()) return run_rate(rate);
  } catch (const ArgumentError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ThresholdFailure& e) {
    std::cerr << "threshold failure: " << e.what() << '\n';
    return kExitThreshold;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
