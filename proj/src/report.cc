// Copyright 2026 The missbandit Authors.
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

#include "missbandit/report.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "missbandit/errors.h"

namespace missbandit {
namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 460.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr std::size_t kMaxPoints = 1000;

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                              "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

// Round step (1, 2 or 5 times a power of ten) giving about `target` ticks.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

std::vector<double> rounds_axis(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1);
  return x;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const Series& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;
  const double y_step = nice_step(y_hi - y_lo, 5);
  y_lo = std::floor(y_lo / y_step) * y_step;
  y_hi = std::ceil(y_hi / y_step) * y_step;
  const double x_step = nice_step(x_hi - x_lo, 5);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(title) << "</text>\n";

  for (double y = y_lo; y <= y_hi + 1e-9 * y_step; y += y_step) {
    svg << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(y)) << "\" x2=\""
        << num(kLeft + plot_w) << "\" y2=\"" << num(py(y)) << "\" stroke=\"#e5e5e5\"/>\n";
    svg << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(y) + 4)
        << "\" text-anchor=\"end\">" << tick_label(y) << "</text>\n";
  }
  for (double x = std::ceil(x_lo / x_step) * x_step; x <= x_hi + 1e-9 * x_step; x += x_step) {
    svg << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\""
        << num(px(x)) << "\" y2=\"" << num(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << tick_label(x) << "</text>\n";
  }
  svg << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w)
      << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 12)
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  svg << "<text transform=\"translate(18," << num(kTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";

  std::size_t legend_row = 0;
  for (const Series& s : series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    const std::size_t stride = std::max<std::size_t>(1, n / kMaxPoints);
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\"";
    if (s.dashed) svg << " stroke-dasharray=\"4 3\" stroke-opacity=\"0.7\"";
    svg << " points=\"";
    for (std::size_t i = 0; i < n; ++i) {
      if (i % stride != 0 && i + 1 != n) continue;
      if (!std::isfinite(s.y[i])) continue;
      svg << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
    }
    svg << "\"/>\n";
    if (!s.in_legend) continue;
    const double ly = kTop + 10 + 18.0 * static_cast<double>(legend_row++);
    const double lx = kLeft + plot_w + 14;
    svg << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 22)
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\""
        << (s.dashed ? " stroke-dasharray=\"4 3\"" : "") << "/>\n";
    svg << "<text x=\"" << num(lx + 28) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.label)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw IoError("cannot write \"" + path + "\"");
}

void write_regret_svg(const std::string& path, const std::string& title,
                      const std::vector<RegretSummary>& summaries) {
  std::vector<Series> series;
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const RegretSummary& s = summaries[i];
    const std::string color = kPalette[i % kPalette.size()];
    const std::vector<double> x = rounds_axis(s.mean_cum_regret.size());
    series.push_back({s.label, x, s.mean_cum_regret, color, false, true});
    series.push_back({s.label + " 2.5%", x, s.lower_band, color, true, false});
    series.push_back({s.label + " 97.5%", x, s.upper_band, color, true, false});
  }
  write_text_file(path, render_line_chart(title, "round", "cumulative regret", series));
}

void write_optrate_svg(const std::string& path, const std::string& title,
                       const std::vector<RegretSummary>& summaries) {
  std::vector<Series> series;
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const RegretSummary& s = summaries[i];
    series.push_back({s.label, rounds_axis(s.optimal_rate.size()), s.optimal_rate,
                      kPalette[i % kPalette.size()], false, true});
  }
  write_text_file(path, render_line_chart(title, "round", "share choosing the best arm", series));
}

void write_estimator_svg(const std::string& path, const std::string& title,
                         const BanditInstance& bandit, const std::vector<EstimatorPath>& paths) {
  std::vector<Series> series;
  std::size_t color = 0;
  for (const EstimatorPath& p : paths) {
    std::vector<double> x(p.rounds.begin(), p.rounds.end());
    series.push_back({p.estimator + " arm " + std::to_string(p.arm + 1), x, p.mean,
                      kPalette[color++ % kPalette.size()], false, true});
  }
  if (!paths.empty()) {
    const double last = static_cast<double>(paths.front().rounds.back());
    for (std::size_t a = 0; a < bandit.num_arms(); ++a) {
      series.push_back({"mean arm " + std::to_string(a + 1),
                        {1.0, last},
                        {bandit.theta(a), bandit.theta(a)},
                        "#555555",
                        true,
                        true});
    }
  }
  write_text_file(path, render_line_chart(title, "samples of the arm", "estimate", series));
}

}  // namespace missbandit
