// Copyright 2026 The FWSP Authors
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

#include "fwsp/divergences.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <string>

#include "fwsp/error.hpp"

namespace fwsp {

void check_simplex(const Vector& v, int size, const char* what) {
  if (v.size() != size) {
    throw Error(Errc::kDimensionMismatch,
                std::string(what) + " must have " + std::to_string(size) +
                    " entries, got " + std::to_string(v.size()));
  }
  if (!v.allFinite() || (v.array() < 0.0).any()) {
    throw Error(Errc::kDomainViolation,
                std::string(what) + " has negative or non-finite entries");
  }
  if (std::abs(v.sum() - 1.0) > kSimplexTolerance) {
    throw Error(Errc::kDomainViolation,
                std::string(what) + " does not sum to one");
  }
}

Vector renormalize(Vector v) {
  const double total = v.sum();
  if (!(total > 0.0) || (v.array() < 0.0).any() || !v.allFinite()) {
    throw Error(Errc::kDomainViolation,
                "cannot renormalize a vector with nonpositive mass");
  }
  return v / total;
}

double kl_divergence(Family family, double theta_mean, double lambda_mean,
                     double sigma2) {
  if (theta_mean == lambda_mean) return 0.0;
  switch (family) {
    case Family::kGaussian: {
      const double diff = theta_mean - lambda_mean;
      return diff * diff / (2.0 * sigma2);
    }
    case Family::kBernoulli: {
      if (!(lambda_mean > 0.0 && lambda_mean < 1.0) ||
          !(theta_mean >= 0.0 && theta_mean <= 1.0)) {
        throw Error(Errc::kDomainViolation,
                    "Bernoulli KL needs theta in [0,1] and lambda in (0,1)");
      }
      double kl = 0.0;
      if (theta_mean > 0.0) kl += theta_mean * std::log(theta_mean / lambda_mean);
      if (theta_mean < 1.0) {
        kl += (1.0 - theta_mean) *
              std::log((1.0 - theta_mean) / (1.0 - lambda_mean));
      }
      return kl;
    }
    case Family::kPoisson: {
      if (!(lambda_mean > 0.0) || !(theta_mean >= 0.0)) {
        throw Error(Errc::kDomainViolation,
                    "Poisson KL needs theta >= 0 and lambda > 0");
      }
      const double log_term =
          theta_mean > 0.0 ? theta_mean * std::log(theta_mean / lambda_mean)
                           : 0.0;
      return log_term - theta_mean + lambda_mean;
    }
  }
  return 0.0;
}

LinearDesign::LinearDesign(const Matrix& features, const Vector& variances,
                           const Vector& p) {
  const Vector weights = p.cwiseQuotient(variances);
  precision_ = features.transpose() * weights.asDiagonal() * features;
  const int d = static_cast<int>(features.cols());

  Eigen::SelfAdjointEigenSolver<Matrix> eig(precision_);
  const Vector& values = eig.eigenvalues();
  const Matrix& vectors = eig.eigenvectors();
  const double largest = values.size() > 0 ? values(d - 1) : 0.0;

  pinv_ = Matrix::Zero(d, d);
  active_basis_.resize(d, d);
  rank_ = 0;
  if (largest > 0.0) {
    const double cutoff = kEigenCutoff * largest;
    for (int j = 0; j < d; ++j) {
      if (values(j) > cutoff) {
        const auto u = vectors.col(j);
        pinv_.noalias() += (u * u.transpose()) / values(j);
        active_basis_.col(rank_++) = u;
      }
    }
  }
  active_basis_.conservativeResize(d, rank_);
}

bool LinearDesign::in_span(const Vector& v) const {
  const Vector residual =
      v - active_basis_ * (active_basis_.transpose() * v);
  return residual.norm() <= kSpanTolerance * v.norm();
}

Vector closest_point_in_halfspace(const LinearDesign& design,
                                  const Vector& theta, const Vector& delta) {
  if (!design.in_span(delta)) {
    throw Error(Errc::kScenarioOutOfSpan,
                "scenario direction lies outside the active feature span");
  }
  const double margin = delta.dot(theta);
  if (margin <= 0.0) return theta;
  const Vector w = design.pinv() * delta;
  return theta - (margin / delta.dot(w)) * w;
}

namespace {

struct PairMinimizer {
  double lambda;
  bool defined;
};

// Weighted-mean minimizer of p_I KL(theta_I||l) + p_x KL(theta_x||l). For
// Gaussian arms the weights carry the per-arm precision, which reduces to
// the plain p-weights when variances agree.
PairMinimizer pair_minimizer(const BanditInstance& inst, const Vector& p,
                             int best, int arm) {
  double w_best = p(best);
  double w_arm = p(arm);
  if (inst.family() == Family::kGaussian) {
    w_best /= inst.variances()(best);
    w_arm /= inst.variances()(arm);
  }
  const double total = w_best + w_arm;
  if (!(total > 0.0)) return {0.0, false};
  const Vector& mean = inst.means();
  return {(w_best * mean(best) + w_arm * mean(arm)) / total, true};
}

void require_unstructured(const BanditInstance& inst) {
  if (inst.is_linear()) {
    throw Error(Errc::kDomainViolation,
                "unstructured divergence requested for a linear instance");
  }
}

void require_linear(const BanditInstance& inst) {
  if (!inst.is_linear()) {
    throw Error(Errc::kDomainViolation,
                "linear divergence requested for an unstructured instance");
  }
}

void require_size(const BanditInstance& inst, const Vector& p) {
  if (p.size() != inst.num_arms()) {
    throw Error(Errc::kDimensionMismatch,
                "allocation has " + std::to_string(p.size()) +
                    " entries, instance has " +
                    std::to_string(inst.num_arms()) + " arms");
  }
}

Vector scenario_direction(const BanditInstance& inst, const Scenario& x) {
  return inst.features().row(inst.best_arm()).transpose() -
         inst.features().row(x.arm).transpose();
}

struct LinearScenario {
  double value = 0.0;
  bool smooth = false;
  Vector w;  // V_p^+ delta
  double q = 0.0;
};

LinearScenario linear_scenario(const BanditInstance& inst,
                               const LinearDesign& design, const Scenario& x) {
  LinearScenario out;
  const Vector delta = scenario_direction(inst, x);
  if (!design.in_span(delta)) return out;
  out.w = design.pinv() * delta;
  out.q = delta.dot(out.w);
  if (!(out.q > 0.0)) return out;
  const double gap = inst.means()(inst.best_arm()) - inst.means()(x.arm);
  out.value = gap * gap / (2.0 * out.q);
  out.smooth = true;
  return out;
}

void fill_linear_gradient(const BanditInstance& inst, const LinearScenario& s,
                          const Scenario& x, Eigen::Ref<Vector> grad) {
  const double gap = inst.means()(inst.best_arm()) - inst.means()(x.arm);
  const double scale = gap * gap / (2.0 * s.q * s.q);
  const Vector proj = inst.features() * s.w;
  grad = scale * proj.array().square() / inst.variances().array();
}

void fill_unstructured(const BanditInstance& inst, const Vector& p,
                       const Scenario& x, double* value,
                       Eigen::Ref<Vector> grad, bool* smooth, bool want_grad) {
  const int best = inst.best_arm();
  const PairMinimizer m = pair_minimizer(inst, p, best, x.arm);
  if (!m.defined) {
    *value = 0.0;
    *smooth = false;
    return;
  }
  const Vector& mean = inst.means();
  const Vector& var = inst.variances();
  const double kl_best =
      kl_divergence(inst.family(), mean(best), m.lambda, var(best));
  const double kl_arm =
      kl_divergence(inst.family(), mean(x.arm), m.lambda, var(x.arm));
  *value = p(best) * kl_best + p(x.arm) * kl_arm;
  *smooth = true;
  if (want_grad) {
    grad.setZero();
    grad(best) = kl_best;
    grad(x.arm) = kl_arm;
  }
}

}  // namespace

double d_value_unstructured(const BanditInstance& inst, const Vector& p,
                            const Scenario& x) {
  require_unstructured(inst);
  require_size(inst, p);
  double value = 0.0;
  bool smooth = false;
  Vector unused(inst.num_arms());
  fill_unstructured(inst, p, x, &value, unused, &smooth, false);
  return value;
}

Vector d_grad_unstructured(const BanditInstance& inst, const Vector& p,
                           const Scenario& x) {
  require_unstructured(inst);
  require_size(inst, p);
  double value = 0.0;
  bool smooth = false;
  Vector grad(inst.num_arms());
  fill_unstructured(inst, p, x, &value, grad, &smooth, true);
  if (!smooth) {
    throw Error(Errc::kNonsmoothPoint,
                "D(p, x) is not differentiable where p_I* = p_x = 0");
  }
  return grad;
}

Vector closest_alternative_linear(const BanditInstance& inst, const Vector& p,
                                  const Scenario& x) {
  require_linear(inst);
  require_size(inst, p);
  const LinearDesign design(inst, p);
  return closest_point_in_halfspace(design, inst.theta(),
                                    scenario_direction(inst, x));
}

double d_value_linear(const BanditInstance& inst, const Vector& p,
                      const Scenario& x) {
  require_linear(inst);
  require_size(inst, p);
  const LinearDesign design(inst, p);
  return linear_scenario(inst, design, x).value;
}

Vector d_grad_linear(const BanditInstance& inst, const Vector& p,
                     const Scenario& x) {
  require_linear(inst);
  require_size(inst, p);
  const LinearDesign design(inst, p);
  const LinearScenario s = linear_scenario(inst, design, x);
  if (!s.smooth) {
    throw Error(Errc::kScenarioOutOfSpan,
                "scenario direction lies outside the active feature span");
  }
  Vector grad(inst.num_arms());
  fill_linear_gradient(inst, s, x, grad);
  return grad;
}

Vector d_grad_linear_kl(const BanditInstance& inst, const Vector& p,
                        const Scenario& x) {
  const Vector alt = closest_alternative_linear(inst, p, x);
  const Vector alt_means = inst.features() * alt;
  Vector grad(inst.num_arms());
  for (int i = 0; i < inst.num_arms(); ++i) {
    grad(i) = kl_divergence(Family::kGaussian, inst.means()(i), alt_means(i),
                            inst.variances()(i));
  }
  return grad;
}

double d_value(const BanditInstance& inst, const Vector& p,
               const Scenario& x) {
  return inst.is_linear() ? d_value_linear(inst, p, x)
                          : d_value_unstructured(inst, p, x);
}

Vector d_grad(const BanditInstance& inst, const Vector& p, const Scenario& x) {
  return inst.is_linear() ? d_grad_linear(inst, p, x)
                          : d_grad_unstructured(inst, p, x);
}

int ScenarioTable::argmin() const {
  int best = 0;
  for (int j = 1; j < values.size(); ++j) {
    if (values(j) < values(best)) best = j;
  }
  return best;
}

ScenarioTable evaluate_scenarios(const BanditInstance& inst, const Vector& p,
                                 bool with_gradients) {
  require_size(inst, p);
  const int k = inst.num_arms();
  const int n = inst.num_scenarios();
  ScenarioTable table;
  table.values.resize(n);
  table.smooth.assign(n, false);
  if (with_gradients) {
    table.grads.setConstant(k, n, std::numeric_limits<double>::quiet_NaN());
  }

  if (inst.is_linear()) {
    const LinearDesign design(inst, p);
    for (const Scenario& x : inst.scenarios()) {
      const LinearScenario s = linear_scenario(inst, design, x);
      table.values(x.position) = s.value;
      table.smooth[x.position] = s.smooth;
      if (with_gradients && s.smooth) {
        fill_linear_gradient(inst, s, x, table.grads.col(x.position));
      }
    }
  } else {
    Vector scratch(k);
    for (const Scenario& x : inst.scenarios()) {
      double value = 0.0;
      bool smooth = false;
      fill_unstructured(inst, p, x, &value, scratch, &smooth, with_gradients);
      table.values(x.position) = value;
      table.smooth[x.position] = smooth;
      if (with_gradients && smooth) table.grads.col(x.position) = scratch;
    }
  }
  return table;
}

double payoff_F(const ScenarioTable& table, const Vector& mu) {
  if (mu.size() != table.values.size()) {
    throw Error(Errc::kDimensionMismatch, "scenario mix has the wrong size");
  }
  return mu.dot(table.values);
}

Vector grad_p_F(const ScenarioTable& table, const Vector& mu) {
  if (mu.size() != table.values.size()) {
    throw Error(Errc::kDimensionMismatch, "scenario mix has the wrong size");
  }
  Vector grad = Vector::Zero(table.grads.rows());
  for (int j = 0; j < mu.size(); ++j) {
    if (mu(j) == 0.0) continue;
    if (!table.smooth[j]) {
      throw Error(Errc::kNonsmoothPoint,
                  "weighted scenario " + std::to_string(j + 1) +
                      " is not differentiable at this allocation");
    }
    grad.noalias() += mu(j) * table.grads.col(j);
  }
  return grad;
}

double payoff_F(const BanditInstance& inst, const Vector& p,
                const Vector& mu) {
  return payoff_F(evaluate_scenarios(inst, p, false), mu);
}

Vector grad_p_F(const BanditInstance& inst, const Vector& p,
                const Vector& mu) {
  return grad_p_F(evaluate_scenarios(inst, p, true), mu);
}

Vector grad_mu_F(const BanditInstance& inst, const Vector& p) {
  return evaluate_scenarios(inst, p, false).values;
}

double gradient_bound(const BanditInstance& inst) {
  require_unstructured(inst);
  const int best = inst.best_arm();
  const Vector& mean = inst.means();
  const Vector& var = inst.variances();
  double bound = 0.0;
  for (const Scenario& x : inst.scenarios()) {
    bound = std::max(bound, kl_divergence(inst.family(), mean(x.arm),
                                          mean(best), var(x.arm)));
    bound = std::max(bound, kl_divergence(inst.family(), mean(best),
                                          mean(x.arm), var(best)));
  }
  return bound;
}

}  // namespace fwsp
