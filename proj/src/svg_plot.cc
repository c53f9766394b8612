// Copyright 2026 The mfgprox Authors.
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

#include "mfgprox/svg_plot.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mfgprox {

namespace {

constexpr double kPanelWidth = 420.0;
constexpr double kPanelHeight = 300.0;
constexpr double kMargin = 50.0;
constexpr double kFloor = 1e-16;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", x);
  return buffer;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void axes(std::ostringstream& svg, double x0, double y0, const std::string& x_label,
          const std::string& y_label) {
  svg << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\""
      << num(kPanelWidth) << "\" height=\"" << num(kPanelHeight)
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  svg << "<text x=\"" << num(x0 + kPanelWidth / 2) << "\" y=\""
      << num(y0 + kPanelHeight + 35) << "\" text-anchor=\"middle\">"
      << escape(x_label) << "</text>\n";
  svg << "<text x=\"" << num(x0 - 38) << "\" y=\"" << num(y0 + kPanelHeight / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 " << num(x0 - 38)
      << " " << num(y0 + kPanelHeight / 2) << ")\">" << escape(y_label)
      << "</text>\n";
}

void exploitability_panel(std::ostringstream& svg, const ConvergenceTrace& trace,
                          int inner_iters, double x0, double y0) {
  std::vector<std::pair<double, double>> points;
  for (const TraceRecord& r : trace.records) {
    if (!r.exploitability) continue;
    points.emplace_back(static_cast<double>(total_steps(r, inner_iters)),
                        std::log10(std::max(*r.exploitability, kFloor)));
  }
  axes(svg, x0, y0, "total inner steps", "log10 exploitability");
  if (points.empty()) return;

  double x_max = 1.0;
  double y_lo = points.front().second;
  double y_hi = y_lo;
  for (const auto& [x, y] : points) {
    x_max = std::max(x_max, x);
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  }
  y_lo = std::floor(y_lo);
  y_hi = std::ceil(y_hi);
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;
  auto px = [&](double x) { return x0 + kPanelWidth * x / x_max; };
  auto py = [&](double y) {
    return y0 + kPanelHeight * (1.0 - (y - y_lo) / (y_hi - y_lo));
  };
  for (double tick = y_lo; tick <= y_hi; tick += 1.0) {
    svg << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(py(tick) + 4)
        << "\" text-anchor=\"end\" font-size=\"10\">1e" << static_cast<int>(tick)
        << "</text>\n";
  }
  svg << "<text x=\"" << num(x0 + kPanelWidth) << "\" y=\""
      << num(y0 + kPanelHeight + 14) << "\" text-anchor=\"end\" font-size=\"10\">"
      << static_cast<long long>(x_max) << "</text>\n";
  svg << "<polyline fill=\"none\" stroke=\"" << kPalette[0] << "\" points=\"";
  for (const auto& [x, y] : points) svg << num(px(x)) << "," << num(py(y)) << " ";
  svg << "\"/>\n";
  for (const auto& [x, y] : points) {
    svg << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y))
        << "\" r=\"2.5\" fill=\"" << kPalette[0] << "\"/>\n";
  }
}

void simplex_panel(std::ostringstream& svg, const std::vector<ProbePoint>& path,
                   double x0, double y0) {
  // Vertices of the probability triangle for actions 0, 1, 2.
  const double vx[3] = {x0 + 20, x0 + kPanelWidth - 20, x0 + kPanelWidth / 2};
  const double vy[3] = {y0 + kPanelHeight - 20, y0 + kPanelHeight - 20, y0 + 20};
  svg << "<polygon fill=\"none\" stroke=\"#333\" points=\"";
  for (int i = 0; i < 3; ++i) svg << num(vx[i]) << "," << num(vy[i]) << " ";
  svg << "\"/>\n";
  const char* labels[3] = {"a=0", "a=1", "a=2"};
  for (int i = 0; i < 3; ++i) {
    svg << "<text x=\"" << num(vx[i]) << "\" y=\""
        << num(vy[i] + (i == 2 ? -6 : 14)) << "\" text-anchor=\"middle\">"
        << labels[i] << "</text>\n";
  }
  svg << "<polyline fill=\"none\" stroke=\"" << kPalette[1] << "\" points=\"";
  for (const ProbePoint& p : path) {
    double x = 0.0;
    double y = 0.0;
    for (int i = 0; i < 3; ++i) {
      x += p.probabilities[i] * vx[i];
      y += p.probabilities[i] * vy[i];
    }
    svg << num(x) << "," << num(y) << " ";
  }
  svg << "\"/>\n";
}

void probability_panel(std::ostringstream& svg,
                       const std::vector<ProbePoint>& path, double x0,
                       double y0) {
  axes(svg, x0, y0, "total inner steps", "probability");
  if (path.empty()) return;
  double x_max = 1.0;
  for (const ProbePoint& p : path) {
    x_max = std::max(x_max, static_cast<double>(p.total_steps));
  }
  const std::size_t num_actions = path.front().probabilities.size();
  for (std::size_t a = 0; a < num_actions; ++a) {
    svg << "<polyline fill=\"none\" stroke=\"" << kPalette[a % 8]
        << "\" points=\"";
    for (const ProbePoint& p : path) {
      svg << num(x0 + kPanelWidth * p.total_steps / x_max) << ","
          << num(y0 + kPanelHeight * (1.0 - p.probabilities[a])) << " ";
    }
    svg << "\"/>\n";
  }
}

}  // namespace

std::string render_experiment_svg(const ConvergenceTrace& trace,
                                  int inner_iters,
                                  const std::vector<ProbePoint>& probe_path,
                                  const std::string& title) {
  const double width = 2 * kPanelWidth + 3 * kMargin + 20;
  const double height = kPanelHeight + 2 * kMargin + 30;
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
      << "\" height=\"" << num(height) << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << num(width / 2) << "\" y=\"20\" text-anchor=\"middle\">"
      << escape(title) << "</text>\n";
  const double y0 = kMargin;
  exploitability_panel(svg, trace, inner_iters, kMargin + 10, y0);
  const double x1 = 2 * kMargin + kPanelWidth + 20;
  const bool triangle =
      !probe_path.empty() && probe_path.front().probabilities.size() == 3;
  if (triangle) {
    simplex_panel(svg, probe_path, x1, y0);
  } else {
    probability_panel(svg, probe_path, x1, y0);
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace mfgprox
