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

#include "fwsp/learning.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "fwsp/error.hpp"

namespace fwsp {

PosteriorState::PosteriorState(Matrix features, Vector variances, double ridge)
    : features_(std::move(features)),
      variances_(std::move(variances)),
      ridge_(ridge) {
  const int d = static_cast<int>(features_.cols());
  const int k = static_cast<int>(features_.rows());
  if (variances_.size() != k) {
    throw Error(Errc::kDimensionMismatch, "one variance per arm is required");
  }
  if (!(ridge_ > 0.0)) {
    throw Error(Errc::kCholeskyFailure,
                "ridge must be positive for the posterior to be proper");
  }
  precision_ = ridge_ * Matrix::Identity(d, d);
  covariance_ = Matrix::Identity(d, d) / ridge_;
  moment_ = Vector::Zero(d);
  counts_.assign(k, 0);
  sample_means_ = Vector::Zero(k);
}

void PosteriorState::update(int arm, double reward) {
  if (arm < 0 || arm >= features_.rows()) {
    throw Error(Errc::kDimensionMismatch, "arm index out of range");
  }
  const Vector a = features_.row(arm).transpose();
  const double w = 1.0 / variances_(arm);
  precision_.noalias() += w * a * a.transpose();
  moment_ += (w * reward) * a;

  const Vector u = covariance_ * a;
  covariance_.noalias() -= (w / (1.0 + w * a.dot(u))) * u * u.transpose();
  covariance_ = 0.5 * (covariance_ + covariance_.transpose()).eval();

  const auto n = ++counts_[arm];
  sample_means_(arm) += (reward - sample_means_(arm)) / static_cast<double>(n);
  ++total_pulls_;
}

Vector PosteriorState::mean() const {
  Eigen::LLT<Matrix> llt(precision_);
  if (llt.info() != Eigen::Success) return covariance_ * moment_;
  return llt.solve(moment_);
}

Matrix PosteriorState::batch_precision() const {
  const int d = static_cast<int>(features_.cols());
  Matrix v = ridge_ * Matrix::Identity(d, d);
  for (int i = 0; i < features_.rows(); ++i) {
    const Vector a = features_.row(i).transpose();
    v.noalias() += (static_cast<double>(counts_[i]) / variances_(i)) * a *
                   a.transpose();
  }
  return v;
}

Vector PosteriorState::batch_moment() const {
  Vector b = Vector::Zero(features_.cols());
  for (int i = 0; i < features_.rows(); ++i) {
    b += (static_cast<double>(counts_[i]) * sample_means_(i) / variances_(i)) *
         features_.row(i).transpose();
  }
  return b;
}

int PosteriorState::data_rank() const {
  const int d = static_cast<int>(features_.cols());
  const Matrix data = precision_ - ridge_ * Matrix::Identity(d, d);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(data, Eigen::EigenvaluesOnly);
  const double largest = eig.eigenvalues().maxCoeff();
  if (!(largest > 0.0)) return 0;
  return static_cast<int>(
      (eig.eigenvalues().array() > 1e-10 * largest).count());
}

Matrix PosteriorState::covariance_factor() const {
  Eigen::LLT<Matrix> llt(covariance_);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  const Matrix rebuilt = precision_.llt().solve(
      Matrix::Identity(precision_.rows(), precision_.cols()));
  Eigen::LLT<Matrix> retry(rebuilt);
  if (retry.info() != Eigen::Success) {
    throw Error(Errc::kCholeskyFailure,
                "posterior covariance is not positive definite");
  }
  return retry.matrixL();
}

PosteriorState posterior_update(PosteriorState state, int arm, double reward) {
  state.update(arm, reward);
  return state;
}

namespace {

Vector standard_normal(int d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(d);
  for (int j = 0; j < d; ++j) z(j) = normal(rng);
  return z;
}

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

}  // namespace

Vector posterior_sample(const PosteriorState& state, Rng& rng) {
  const Matrix factor = state.covariance_factor();
  return state.mean() + factor * standard_normal(factor.rows(), rng);
}

double simulate_reward(const BanditInstance& inst, int arm, Rng& rng) {
  if (arm < 0 || arm >= inst.num_arms()) {
    throw Error(Errc::kDimensionMismatch, "arm index out of range");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  return inst.means()(arm) + std::sqrt(inst.variances()(arm)) * normal(rng);
}

AlternativeDraw sample_alternative(const BanditInstance& hat, const Vector& p,
                                   const std::function<Vector()>& draw,
                                   int max_attempts) {
  const int best = hat.best_arm();
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    const Vector drawn_means = hat.features() * draw();
    for (int x = 0; x < hat.num_arms(); ++x) {
      if (x != best && drawn_means(x) > drawn_means(best)) {
        return {x, false, attempt};
      }
    }
  }
  return {select_scenario(hat, p).arm, true, max_attempts};
}

AlternativeDraw sample_alternative(const PosteriorState& state,
                                   const BanditInstance& hat, const Vector& p,
                                   Rng& rng, int max_attempts) {
  const int best = hat.best_arm();
  const int k = hat.num_arms();
  const Matrix factor = state.covariance_factor();
  const Vector mean = state.mean();

  // Row x: (a_x - a_best)^T L, so a draw beats the best arm iff
  // offset_x + rows_x z > 0.
  const Matrix diffs =
      hat.features().rowwise() - hat.features().row(best);
  const Vector offsets = diffs * mean;
  const Matrix rows = diffs * factor;

  double acceptance_bound = 0.0;
  for (int x = 0; x < k; ++x) {
    if (x == best) continue;
    const double spread = rows.row(x).norm();
    acceptance_bound += spread > 0.0 ? normal_cdf(offsets(x) / spread)
                                     : (offsets(x) > 0.0 ? 1.0 : 0.0);
  }
  if (acceptance_bound * max_attempts <= kNegligibleAcceptance) {
    return {select_scenario(hat, p).arm, true, 0};
  }

  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    const Vector scores = offsets + rows * standard_normal(factor.rows(), rng);
    for (int x = 0; x < k; ++x) {
      if (x != best && scores(x) > 0.0) return {x, false, attempt};
    }
  }
  return {select_scenario(hat, p).arm, true, max_attempts};
}

Vector project_mix(const BanditInstance& inst, const Vector& arm_mix) {
  const int m = inst.num_scenarios();
  Vector mix(m);
  for (const Scenario& x : inst.scenarios()) mix(x.position) = arm_mix(x.arm);
  const double total = mix.sum();
  if (!(total > 0.0)) return Vector::Constant(m, 1.0 / m);
  return mix / total;
}

namespace {

// Posterior draw with a unique best arm: redraw on exact ties, then nudge.
BanditInstance sample_hat(const BanditInstance& truth,
                          const PosteriorState& posterior, Rng& rng,
                          int max_redraws) {
  Vector theta;
  for (int attempt = 0; attempt <= max_redraws; ++attempt) {
    theta = posterior_sample(posterior, rng);
    try {
      return truth.with_theta(theta);
    } catch (const Error& e) {
      if (e.code() != Errc::kNonUniqueBestArm) throw;
    }
  }
  theta(0) += 1e-12;
  return truth.with_theta(theta);
}

TrajectoryRecord learning_record(const BanditInstance& truth, double step,
                                 const Vector& p, const Vector& arm_mix,
                                 int arm, int scenario_arm, bool fallback,
                                 int rank) {
  TrajectoryRecord rec;
  rec.step = step;
  rec.p = p;
  rec.mu = project_mix(truth, arm_mix);
  const Diagnostics diag = diagnose(truth, rec.p, rec.mu);
  rec.F = diag.F;
  rec.V = diag.V;
  rec.gap_lb = diag.gap_lb;
  rec.pulled_arm = arm;
  rec.chosen_scenario = scenario_arm;
  rec.used_fallback = fallback;
  rec.posterior_rank = rank;
  return rec;
}

}  // namespace

LearningRun run_learning(const BanditInstance& truth_in, std::int64_t rounds,
                         std::uint64_t seed, const LearningOptions& options) {
  if (rounds < 1) {
    throw Error(Errc::kDomainViolation, "the learning run needs T >= 1");
  }
  if (truth_in.family() != Family::kGaussian) {
    throw Error(Errc::kDomainViolation,
                "posterior sampling is implemented for Gaussian rewards only");
  }
  const BanditInstance truth = truth_in.as_linear();
  const int k = truth.num_arms();

  Rng rng(seed);
  LearningRun run{{}, {}, {}, Vector::Constant(k, 1.0 / k),
                  PosteriorState(truth.features(), truth.variances(),
                                 options.ridge)};
  Vector p = Vector::Constant(k, 1.0 / k);

  for (int arm = 0; arm < k; ++arm) {
    run.posterior.update(arm, simulate_reward(truth, arm, rng));
    run.pulls.push_back(arm);
    run.records.push_back(learning_record(truth, arm - k, p, run.arm_mix, arm,
                                          -1, false,
                                          run.posterior.data_rank()));
  }

  auto n = static_cast<std::int64_t>(k);
  for (std::int64_t t = 0; t < rounds; ++t, ++n) {
    const double step = 1.0 / static_cast<double>(n + 1);
    const double keep = static_cast<double>(n) * step;

    const BanditInstance hat =
        sample_hat(truth, run.posterior, rng, options.max_tie_redraws);
    const AlternativeDraw alt =
        sample_alternative(run.posterior, hat, p, rng, options.max_attempts);
    run.alternatives.push_back(alt.arm);
    run.arm_mix *= keep;
    run.arm_mix(alt.arm) += step;

    const int arm =
        argmax_lowest(grad_p_F(hat, p, project_mix(hat, run.arm_mix)));
    p *= keep;
    p(arm) += step;

    run.posterior.update(arm, simulate_reward(truth, arm, rng));
    run.pulls.push_back(arm);

    if (options.schedule.contains(t + 1, rounds)) {
      run.records.push_back(learning_record(
          truth, static_cast<double>(t + 1), p, run.arm_mix, arm, alt.arm,
          alt.used_fallback, run.posterior.data_rank()));
    }
  }
  return run;
}

}  // namespace fwsp
