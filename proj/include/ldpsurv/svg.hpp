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
#include <sstream>
#include <string>
#include <vector>

#include "ldpsurv/errors.hpp"
#include "ldpsurv/io.hpp"

namespace ldpsurv::svg {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> values;
};

inline std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Plain SVG 1.1 line chart of several series over a shared x grid.
inline std::string line_chart(const std::string& title, const std::string& x_label,
                              const std::vector<double>& xs,
                              const std::vector<Series>& series) {
  ldpsurv::detail::require(xs.size() >= 2, "line_chart needs >= 2 points");
  constexpr double kWidth = 640, kHeight = 420;
  constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;

  const double x_lo = xs.front(), x_hi = xs.back();
  double y_hi = 0.0;
  for (const Series& s : series) {
    ldpsurv::detail::require(s.values.size() == xs.size(), "series length mismatch");
    for (double v : s.values) y_hi = std::max(y_hi, v);
  }
  if (y_hi <= 0.0) y_hi = 1.0;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return kTop + plot_h - y / y_hi * plot_h; };
  auto num = [](double v) { return io::format_double(v); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
      << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kLeft << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
      << escape(title) << "</text>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double xv = x_lo + (x_hi - x_lo) * tick / 4.0;
    const double yv = y_hi * tick / 4.0;
    out << "<text x=\"" << num(px(xv)) << "\" y=\"" << kTop + plot_h + 18
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << num(std::round(xv * 1000) / 1000) << "</text>\n"
        << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py(yv) + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << num(std::round(yv * 1e5) / 1e5) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << escape(x_label)
      << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    out << "<path fill=\"none\" stroke=\"" << series[s].color << "\" stroke-width=\"1.5\" d=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out << (i ? " L" : "M") << num(px(xs[i])) << ',' << num(py(series[s].values[i]));
    }
    out << "\"/>\n";
    const double ly = kTop + 16 + 18.0 * s;
    out << "<line x1=\"" << kLeft + plot_w + 10 << "\" y1=\"" << ly << "\" x2=\""
        << kLeft + plot_w + 30 << "\" y2=\"" << ly << "\" stroke=\"" << series[s].color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kLeft + plot_w + 36 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(series[s].label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

inline std::string mse_chart(const MseReport& report) {
  return line_chart("MSE at alpha = " + io::format_double(report.alpha), "t", report.grid,
                    {{"private", "#d62728", report.private_error.mse},
                     {"generalized Beran", "#1f77b4", report.gberan_error.mse},
                     {"Beran", "#2ca02c", report.beran_error.mse}});
}

}  // namespace ldpsurv::svg
