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

#pragma once

#include <vector>

#include "fwsp/model.hpp"

namespace fwsp {

// Absolute tolerance on the unit-sum constraint of simplex inputs.
inline constexpr double kSimplexTolerance = 1e-12;

// Throws kDimensionMismatch / kDomainViolation unless `v` has `size`
// nonnegative entries summing to one within kSimplexTolerance.
void check_simplex(const Vector& v, int size, const char* what);

// Divides by the sum. Only for vectors read from external input.
Vector renormalize(Vector v);

// KL(P_theta || P_lambda) for a one-parameter family in mean
// parametrization. `sigma2` is only read for the Gaussian family.
double kl_divergence(Family family, double theta_mean, double lambda_mean,
                     double sigma2 = 1.0);

// Pseudo-inverse of V_p = sum_i p_i sigma_i^-2 a_i a_i^T on the active feature
// span. Eigenvalues below kEigenCutoff * lambda_max are treated as zero; a
// vector is in span when its residual off the active eigenspace is at most
// kSpanTolerance times its norm.
class LinearDesign {
 public:
  static constexpr double kEigenCutoff = 1e-10;
  static constexpr double kSpanTolerance = 1e-8;

  LinearDesign(const Matrix& features, const Vector& variances,
               const Vector& p);
  LinearDesign(const BanditInstance& inst, const Vector& p)
      : LinearDesign(inst.features(), inst.variances(), p) {}

  const Matrix& precision() const { return precision_; }
  const Matrix& pinv() const { return pinv_; }
  int rank() const { return rank_; }
  bool in_span(const Vector& v) const;

 private:
  Matrix precision_;
  Matrix pinv_;
  Matrix active_basis_;
  int rank_ = 0;
};

// Minimizer of 1/2 ||v - theta||^2_{V_p} over the halfspace delta^T v <= 0.
// Throws kScenarioOutOfSpan when delta is outside the active span.
Vector closest_point_in_halfspace(const LinearDesign& design,
                                  const Vector& theta, const Vector& delta);

// Scenario divergence D(p, x) and its gradient in p. The unstructured forms
// evaluate the inner infimum at its weighted-mean minimizer; the linear forms
// use the quadratic-form expression through LinearDesign.
double d_value_unstructured(const BanditInstance& inst, const Vector& p,
                            const Scenario& x);
Vector d_grad_unstructured(const BanditInstance& inst, const Vector& p,
                           const Scenario& x);
Vector closest_alternative_linear(const BanditInstance& inst, const Vector& p,
                                  const Scenario& x);
double d_value_linear(const BanditInstance& inst, const Vector& p,
                      const Scenario& x);
Vector d_grad_linear(const BanditInstance& inst, const Vector& p,
                     const Scenario& x);
// Per-arm KL(P_theta,i || P_vartheta,i) at the closest alternative. Same
// quantity as d_grad_linear, computed through the minimizer instead.
Vector d_grad_linear_kl(const BanditInstance& inst, const Vector& p,
                        const Scenario& x);

double d_value(const BanditInstance& inst, const Vector& p, const Scenario& x);
Vector d_grad(const BanditInstance& inst, const Vector& p, const Scenario& x);

// All scenarios at one allocation, sharing the V_p factorization.
// grads is K x (K-1); a column is NaN where `smooth` is false.
struct ScenarioTable {
  Vector values;
  Matrix grads;
  std::vector<bool> smooth;

  int argmin() const;  // lowest position on ties
};

ScenarioTable evaluate_scenarios(const BanditInstance& inst, const Vector& p,
                                 bool with_gradients = true);

// F(p, mu) = sum_x mu_x D(p, x).
double payoff_F(const BanditInstance& inst, const Vector& p, const Vector& mu);
Vector grad_p_F(const BanditInstance& inst, const Vector& p, const Vector& mu);
Vector grad_mu_F(const BanditInstance& inst, const Vector& p);

// Table-based variants for callers that already hold an evaluation.
double payoff_F(const ScenarioTable& table, const Vector& mu);
Vector grad_p_F(const ScenarioTable& table, const Vector& mu);

// max_x max(KL(theta_x || theta_I*), KL(theta_I* || theta_x)): an upper bound
// on every gradient entry of an unstructured instance.
double gradient_bound(const BanditInstance& inst);

}  // namespace fwsp
