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

#include "missbandit/nuisance.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "missbandit/errors.h"
#include "missbandit/normal.h"

namespace missbandit {
namespace {

constexpr double kGradientTol = 1e-8;
constexpr int kMaxIterations = 100;
constexpr double kSeparationBound = 50.0;
constexpr double kPerfectFitLogLik = 1e-6;
constexpr double kQCeiling = 1.0 - 1e-6;

double affine(double intercept, const std::vector<double>& coef,
              std::span<const double> x) {
  double v = intercept;
  for (std::size_t j = 0; j < coef.size() && j < x.size(); ++j) v += coef[j] * x[j];
  return v;
}

// log Phi(x), accurate deep in the lower tail.
double log_normal_cdf(double x) {
  if (x > -30.0) return std::log(normal_cdf(x));
  const double x2 = x * x;
  return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) +
         std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

// phi(x) / Phi(x).
double mills_ratio(double x) {
  if (x > -30.0) return normal_pdf(x) / normal_cdf(x);
  const double x2 = x * x;
  return -x / (1.0 - 1.0 / x2 + 3.0 / (x2 * x2));
}

double probit_loglik(const Eigen::MatrixXd& z, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& params) {
  const Eigen::VectorXd eta = z * params;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    ll += log_normal_cdf(y[i] > 0.5 ? eta[i] : -eta[i]);
  }
  return ll;
}

ProbitModel intercept_only(double mean, std::size_t dim, double q_floor, int iterations) {
  ProbitModel m;
  m.intercept = normal_quantile(std::clamp(mean, q_floor, kQCeiling));
  m.coefficients.assign(dim, 0.0);
  m.q_floor = q_floor;
  m.fallback = true;
  m.iterations = iterations;
  return m;
}

}  // namespace

double LinearModel::predict(std::span<const double> x) const {
  return affine(intercept, coefficients, x);
}

LinearModel LinearModel::Constant(double value, std::size_t dim) {
  LinearModel m;
  m.intercept = value;
  m.coefficients.assign(dim, 0.0);
  return m;
}

double ProbitModel::linear_predictor(std::span<const double> x) const {
  return affine(intercept, coefficients, x);
}

double ProbitModel::predict(std::span<const double> x) const {
  return std::clamp(normal_cdf(linear_predictor(x)), q_floor, 1.0);
}

LinearModel fit_ols(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& rewards) {
  const Eigen::Index n = covariates.rows();
  const Eigen::Index d = covariates.cols();
  if (rewards.size() != n) throw DomainError("fit_ols: row count mismatch");
  if (n < d + 1) {
    throw InsufficientDataError("fit_ols: need at least d + 1 observed rows");
  }
  const Eigen::RowVectorXd x_mean = covariates.colwise().mean();
  const double y_mean = rewards.mean();
  const Eigen::MatrixXd xc = covariates.rowwise() - x_mean;
  const Eigen::VectorXd yc = rewards.array() - y_mean;

  Eigen::MatrixXd gram = xc.transpose() * xc;
  LinearModel model;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double top = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  if (d > 0 && eig.eigenvalues().minCoeff() <= 1e-12 * top) {
    gram.diagonal().array() += 1e-8;
    model.degenerate = true;
  }
  const Eigen::VectorXd slope =
      d > 0 ? Eigen::VectorXd(gram.ldlt().solve(xc.transpose() * yc)) : Eigen::VectorXd();
  model.coefficients.assign(slope.data(), slope.data() + slope.size());
  model.intercept = y_mean - (d > 0 ? x_mean.dot(slope) : 0.0);
  return model;
}

ProbitModel fit_probit(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& flags,
                       double q_floor) {
  if (!(q_floor > 0.0 && q_floor <= 1.0)) {
    throw DomainError("fit_probit: q_floor must lie in (0, 1]");
  }
  const Eigen::Index n = covariates.rows();
  const Eigen::Index d = covariates.cols();
  const auto dim = static_cast<std::size_t>(d);
  if (flags.size() != n) throw DomainError("fit_probit: row count mismatch");
  if (n == 0) return intercept_only(1.0, dim, q_floor, 0);
  const double mean = flags.mean();
  const bool single_class = (flags.array() > 0.5).all() || (flags.array() < 0.5).all();
  if (single_class || n < d + 1) return intercept_only(mean, dim, q_floor, 0);

  Eigen::MatrixXd z(n, d + 1);
  z.col(0).setOnes();
  z.rightCols(d) = covariates;

  Eigen::VectorXd params = Eigen::VectorXd::Zero(d + 1);
  params[0] = normal_quantile(mean);
  double ll = probit_loglik(z, flags, params);

  for (int it = 1; it <= kMaxIterations; ++it) {
    const Eigen::VectorXd eta = z * params;
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(d + 1);
    Eigen::MatrixXd info = Eigen::MatrixXd::Zero(d + 1, d + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sign = flags[i] > 0.5 ? 1.0 : -1.0;
      const double lam = sign * mills_ratio(sign * eta[i]);
      grad.noalias() += lam * z.row(i).transpose();
      info.noalias() += lam * (lam + eta[i]) * z.row(i).transpose() * z.row(i);
    }
    if (grad.cwiseAbs().maxCoeff() < kGradientTol) {
      // A perfect fit means the classes are separable and the slope is unidentified.
      if (ll > -kPerfectFitLogLik) break;
      ProbitModel m;
      m.intercept = params[0];
      m.coefficients.assign(params.data() + 1, params.data() + 1 + d);
      m.q_floor = q_floor;
      m.iterations = it - 1;
      return m;
    }
    // info is the negative Hessian; positive definite away from separation.
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) break;
    const Eigen::VectorXd step = ldlt.solve(grad);
    // Losses within rounding noise of the current likelihood count as progress.
    const double slack = 1e-9 * std::max(1.0, std::abs(ll));
    double scale = 1.0;
    Eigen::VectorXd next = params + step;
    double next_ll = probit_loglik(z, flags, next);
    for (int h = 0; h < 30 && !(next_ll >= ll - slack); ++h) {
      scale *= 0.5;
      next = params + scale * step;
      next_ll = probit_loglik(z, flags, next);
    }
    if (!(next_ll >= ll - slack)) break;
    params = next;
    ll = next_ll;
    if (params.cwiseAbs().maxCoeff() > kSeparationBound) break;
  }
  return intercept_only(mean, dim, q_floor, kMaxIterations);
}

std::span<const ArmRecord> training_view(const SplitPlan& plan,
                                          std::span<const ArmRecord> history,
                                          std::size_t t) {
  if (t == 0) throw DomainError("training_view: rounds start at 1");
  if (const auto* batch = std::get_if<DifferentBatch>(&plan)) {
    if (batch->auxiliary.empty()) {
      throw ConfigError("training_view: M1 plan has an empty auxiliary dataset");
    }
    return batch->auxiliary;
  }
  const std::size_t keep = t >= 2 ? std::min(t - 2, history.size()) : 0;
  return history.first(keep);
}

NuisanceModels fit_nuisances(std::span<const ArmRecord> view, std::size_t dim,
                             double q_floor) {
  std::size_t n_obs = 0;
  for (const ArmRecord& r : view) n_obs += r.observed ? 1 : 0;

  NuisanceModels out;
  const auto d = static_cast<Eigen::Index>(dim);
  if (n_obs >= dim + 1) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n_obs), d);
    Eigen::VectorXd y(static_cast<Eigen::Index>(n_obs));
    Eigen::Index i = 0;
    for (const ArmRecord& r : view) {
      if (!r.observed) continue;
      for (Eigen::Index j = 0; j < d; ++j) x(i, j) = r.covariates[j];
      y[i++] = r.reward;
    }
    out.theta = fit_ols(x, y);
  } else {
    double sum = 0.0;
    for (const ArmRecord& r : view) sum += r.observed ? r.reward : 0.0;
    out.theta = LinearModel::Constant(n_obs > 0 ? sum / static_cast<double>(n_obs) : 0.0,
                                      dim);
  }

  Eigen::MatrixXd x(static_cast<Eigen::Index>(view.size()), d);
  Eigen::VectorXd c(static_cast<Eigen::Index>(view.size()));
  for (std::size_t i = 0; i < view.size(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(static_cast<Eigen::Index>(i), j) = view[i].covariates[j];
    c[static_cast<Eigen::Index>(i)] = view[i].observed ? 1.0 : 0.0;
  }
  out.q = fit_probit(x, c, q_floor);
  return out;
}

}  // namespace missbandit
