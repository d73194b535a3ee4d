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

#ifndef MISSBANDIT_REPORT_H_
#define MISSBANDIT_REPORT_H_

#include <string>
#include <vector>

#include "missbandit/analysis.h"
#include "missbandit/env.h"
#include "missbandit/monte_carlo.h"

namespace missbandit {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
  bool in_legend = true;
};

// Self-contained SVG line chart with linear axes fitted to the data.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series);

void write_text_file(const std::string& path, const std::string& text);

// Mean cumulative regret per policy with dashed 2.5 / 97.5 percentile bands.
void write_regret_svg(const std::string& path, const std::string& title,
                      const std::vector<RegretSummary>& summaries);
void write_optrate_svg(const std::string& path, const std::string& title,
                       const std::vector<RegretSummary>& summaries);
// Estimator means per arm, with a flat reference line at each arm's mean.
void write_estimator_svg(const std::string& path, const std::string& title,
                         const BanditInstance& bandit, const std::vector<EstimatorPath>& paths);

}  // namespace missbandit

#endif  // MISSBANDIT_REPORT_H_
