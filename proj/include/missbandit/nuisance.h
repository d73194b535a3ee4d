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

#ifndef MISSBANDIT_NUISANCE_H_
#define MISSBANDIT_NUISANCE_H_

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "missbandit/estimators.h"

namespace missbandit {

// Affine outcome model theta_hat(x) = intercept + x'coefficients.
struct LinearModel {
  double intercept = 0.0;
  std::vector<double> coefficients;
  // Set when the centred Gram matrix was singular and a 1e-8 ridge was
  // added to solve it.
  bool degenerate = false;

  double predict(std::span<const double> x) const;
  static LinearModel Constant(double value, std::size_t dim);
};

// Probit propensity model, truncated to [q_floor, 1].
struct ProbitModel {
  double intercept = 0.0;
  std::vector<double> coefficients;
  double q_floor = 0.05;
  // Set when the Newton fit was abandoned for the intercept-only model.
  bool fallback = false;
  int iterations = 0;

  double linear_predictor(std::span<const double> x) const;
  double predict(std::span<const double> x) const;
};

// Least squares with intercept. Solves the centred normal equations, so a
// constant covariate column gets a zero slope. Throws InsufficientDataError
// when rows < cols + 1.
LinearModel fit_ols(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& rewards);

// Probit maximum likelihood by Newton-Raphson with step halving: gradient
// sup-norm tolerance 1e-8, at most 100 iterations. Never throws on data
// problems; falls back to the intercept-only model
// Phi^-1(clamp(mean(flags), q_floor, 1 - 1e-6)) on a single class, too few
// rows, separation or non-convergence.
ProbitModel fit_probit(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& flags,
                       double q_floor);

// Sample-splitting schemes that keep the nuisances independent of the
// records they are evaluated on.
//   DifferentBatch (M1): fit on an auxiliary dataset drawn outside the run.
//   LeaveOneOut (M2):    at round t fit on records 1..t-2 of the run.
struct DifferentBatch {
  std::vector<ArmRecord> auxiliary;
};
struct LeaveOneOut {};
using SplitPlan = std::variant<DifferentBatch, LeaveOneOut>;

// Records the nuisances may be trained on at (1-based) round t of an arm's
// history. Throws ConfigError for M1 with an empty auxiliary set and
// DomainError for t == 0.
std::span<const ArmRecord> training_view(const SplitPlan& plan,
                                          std::span<const ArmRecord> history,
                                          std::size_t t);

struct NuisanceModels {
  LinearModel theta;
  ProbitModel q;
};

// theta_hat by OLS on the observed records (constant at their mean, or 0,
// when there are fewer than dim + 1 of them); q_hat by probit on all
// records.
NuisanceModels fit_nuisances(std::span<const ArmRecord> view, std::size_t dim,
                             double q_floor);

}  // namespace missbandit

#endif  // MISSBANDIT_NUISANCE_H_
