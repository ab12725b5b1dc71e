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

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ldpsurv/errors.hpp"
#include "ldpsurv/estimators.hpp"
#include "ldpsurv/experiments.hpp"
#include "ldpsurv/privacy.hpp"
#include "ldpsurv/records.hpp"
#include "ldpsurv/synthdata.hpp"

namespace ldpsurv::io {

/// 17 significant digits, round-trip exact and platform independent.
inline std::string format_double(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of negative zero
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  }
};

namespace detail {

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    const auto begin = field.find_first_not_of(" \t\r");
    const auto end = field.find_last_not_of(" \t\r");
    fields.push_back(begin == std::string::npos ? "" : field.substr(begin, end - begin + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

inline double parse_double(const std::string& text, std::size_t row) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE ||
      !std::isfinite(value)) {
    throw DataError("row " + std::to_string(row) + ": cannot parse number '" +
                    text + "'");
  }
  return value;
}

inline std::vector<int> covariate_columns(const CsvTable& table) {
  std::vector<int> columns;
  for (int k = 1;; ++k) {
    const int c = table.column("x" + std::to_string(k));
    if (c < 0) break;
    columns.push_back(c);
  }
  if (columns.empty()) throw DataError("missing covariate column x1");
  return columns;
}

inline int required_column(const CsvTable& table, const std::string& name) {
  const int c = table.column(name);
  if (c < 0) throw DataError("missing column '" + name + "'");
  return c;
}

}  // namespace detail

inline CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty CSV input");
  table.header = detail::split_line(line);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = detail::split_line(line);
    if (fields.size() != table.header.size()) {
      throw DataError("row " + std::to_string(table.rows.size() + 1) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

/// Raw dataset with header y,delta,x1[,x2,...].
inline std::vector<SurvivalRecord> survival_records(const CsvTable& table) {
  const int y_col = detail::required_column(table, "y");
  const int d_col = detail::required_column(table, "delta");
  const std::vector<int> x_cols = detail::covariate_columns(table);
  std::vector<SurvivalRecord> records;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    SurvivalRecord rec{detail::parse_double(row[y_col], r + 1), 0, {}};
    const double delta = detail::parse_double(row[d_col], r + 1);
    if (delta != 0.0 && delta != 1.0) {
      throw DataError("row " + std::to_string(r + 1) + ": delta must be 0 or 1");
    }
    if (rec.y < 0.0) throw DataError("row " + std::to_string(r + 1) + ": y must be >= 0");
    rec.delta = static_cast<int>(delta);
    for (int c : x_cols) rec.x.push_back(detail::parse_double(row[c], r + 1));
    records.push_back(std::move(rec));
  }
  return records;
}

/// Privatized dataset with header y,z,x1[,x2,...].
inline std::vector<PrivateRecord> private_records(const CsvTable& table) {
  const int y_col = detail::required_column(table, "y");
  const int z_col = detail::required_column(table, "z");
  const std::vector<int> x_cols = detail::covariate_columns(table);
  std::vector<PrivateRecord> records;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    PrivateRecord rec{detail::parse_double(row[y_col], r + 1),
                      detail::parse_double(row[z_col], r + 1), {}};
    if (rec.y < 0.0) throw DataError("row " + std::to_string(r + 1) + ": y must be >= 0");
    for (int c : x_cols) rec.x.push_back(detail::parse_double(row[c], r + 1));
    records.push_back(std::move(rec));
  }
  return records;
}

namespace detail {

inline void write_covariate_header(std::ostream& out, std::size_t p) {
  for (std::size_t k = 1; k <= p; ++k) out << ",x" << k;
  out << '\n';
}

}  // namespace detail

inline void write_survival_csv(std::ostream& out,
                               const std::vector<SurvivalRecord>& records) {
  out << "y,delta";
  detail::write_covariate_header(out, records.empty() ? 1 : records.front().x.size());
  for (const SurvivalRecord& r : records) {
    out << format_double(r.y) << ',' << r.delta;
    for (double v : r.x) out << ',' << format_double(v);
    out << '\n';
  }
}

inline void write_private_csv(std::ostream& out,
                              const std::vector<PrivateRecord>& records) {
  out << "y,z";
  detail::write_covariate_header(out, records.empty() ? 1 : records.front().x.size());
  for (const PrivateRecord& r : records) {
    out << format_double(r.y) << ',' << format_double(r.z);
    for (double v : r.x) out << ',' << format_double(v);
    out << '\n';
  }
}

inline void write_curve_csv(std::ostream& out, const Curve& curve) {
  out << "t,value\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out << format_double(curve.grid[i]) << ',' << format_double(curve.values[i]) << '\n';
  }
}

inline void write_mse_csv(std::ostream& out, const MseReport& report) {
  out << "t,mse_private,mse_gberan,mse_beran,bias2_private,var_private\n";
  for (std::size_t i = 0; i < report.grid.size(); ++i) {
    out << format_double(report.grid[i]) << ','
        << format_double(report.private_error.mse[i]) << ','
        << format_double(report.gberan_error.mse[i]) << ','
        << format_double(report.beran_error.mse[i]) << ','
        << format_double(report.private_error.bias2[i]) << ','
        << format_double(report.private_error.variance[i]) << '\n';
  }
}

inline void write_rate_csv(std::ostream& out, const RateReport& report) {
  out << "alpha,n,h,risk,b,risk_se\n";
  for (const RateRow& row : report.rows) {
    out << format_double(row.alpha) << ',' << row.n << ',' << format_double(row.h)
        << ',' << format_double(row.risk) << ',' << format_double(row.b) << ','
        << format_double(row.risk_se) << '\n';
  }
}

namespace detail {

inline void dump_json(std::ostream& out, const nlohmann::json& value, int indent,
                      int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (value.type()) {
    case nlohmann::json::value_t::object: {
      if (value.empty()) { out << "{}"; return; }
      out << "{\n";
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << pad << nlohmann::json(it.key()).dump() << ": ";
        dump_json(out, it.value(), indent, depth + 1);
      }
      out << '\n' << close_pad << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (value.empty()) { out << "[]"; return; }
      out << "[\n";
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) out << ",\n";
        out << pad;
        dump_json(out, value[i], indent, depth + 1);
      }
      out << '\n' << close_pad << ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = value.get<double>();
      out << (std::isfinite(v) ? format_double(v) : "null");
      return;
    }
    default:
      out << value.dump();
  }
}

}  // namespace detail

/// JSON text with every float printed at 17 significant digits.
inline std::string dump_json(const nlohmann::json& value) {
  std::ostringstream out;
  detail::dump_json(out, value, 2, 0);
  out << '\n';
  return out.str();
}

inline nlohmann::json to_json(const ExpModel& model) {
  return {{"lambda_t", model.lambda_t}, {"lambda_c", model.lambda_c}};
}

inline ExpModel model_from_json(const nlohmann::json& j) {
  ExpModel model;
  try {
    model.lambda_t = j.at("lambda_t").get<std::array<double, 3>>();
    model.lambda_c = j.at("lambda_c").get<std::array<double, 3>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad model descriptor: ") + e.what());
  }
  model.validate();
  return model;
}

inline nlohmann::json to_json(const AuditReport& report) {
  nlohmann::json renyi = nlohmann::json::array();
  for (const RenyiValue& r : report.renyi) {
    renyi.push_back({{"gamma", r.gamma}, {"value", r.value}});
  }
  return {{"alpha", report.alpha},
          {"max_ratio", report.max_ratio},
          {"bound", report.bound},
          {"renyi", renyi},
          {"pass", report.pass}};
}

inline const char* to_string(BandwidthRule::Kind kind) {
  return kind == BandwidthRule::Kind::Fixed ? "fixed" : "plugin";
}

/// Run metadata sidecar for one MSE report.
inline nlohmann::json mse_metadata(const ExperimentPlan& plan, const TimeWindow& window,
                                   const MseReport& report) {
  return {
      {"model", to_json(plan.model)},
      {"n", plan.n},
      {"replications", plan.replications},
      {"alpha", report.alpha},
      {"alphas", plan.alphas},
      {"x_eval", plan.x_eval},
      {"t0", window.t0},
      {"t1", window.t1},
      {"grid_size", plan.grid_size},
      {"bandwidth_rule",
       {{"kind", to_string(plan.bandwidth_rule.kind)}, {"value", plan.bandwidth_rule.value}}},
      {"h_mean", report.h_mean},
      {"b_mean", report.b_mean},
      {"denom_floor", plan.denom_floor},
      {"clip_p", plan.clip_p},
      {"master_seed", plan.master_seed},
      {"nominal_censoring", report.nominal_censoring},
      {"empirical_censoring", report.empirical_censoring},
      {"replications_used", report.replications_used},
      {"degenerate", report.degenerate},
      {"floor_hits", report.floor_hits},
      {"time_avg_mse",
       {{"private", time_averaged(report.grid, report.private_error.mse)},
        {"gberan", time_averaged(report.grid, report.gberan_error.mse)},
        {"beran", time_averaged(report.grid, report.beran_error.mse)}}},
      {"mean_abs_bias_gap_private_gberan",
       mean_abs_bias_gap(report, report.private_error, report.gberan_error)},
  };
}

inline nlohmann::json rate_summary(const RatePlan& plan, const RateReport& report) {
  std::vector<long long> ns = plan.ns;
  return {{"model", to_json(plan.model)},
          {"alphas", plan.alphas},
          {"ns", ns},
          {"beta", plan.beta},
          {"p", plan.p},
          {"replications", plan.replications},
          {"master_seed", plan.master_seed},
          {"x_eval", plan.x_eval},
          {"t0", report.t0},
          {"t1", report.t1},
          {"grid_size", plan.grid_size},
          {"clip_p", plan.clip_p},
          {"slope", report.slope},
          {"intercept", report.intercept},
          {"slope_se", report.slope_se},
          {"fit_se", report.fit_se},
          {"theoretical_slope", report.theoretical_slope}};
}

}  // namespace ldpsurv::io
