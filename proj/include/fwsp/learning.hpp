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

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "fwsp/dynamics.hpp"
#include "fwsp/model.hpp"

namespace fwsp {

// One generator per replication, seeded with base_seed + replication.
using Rng = std::mt19937_64;

// Gaussian linear posterior N(V^-1 b, V^-1) with V = ridge I +
// sum_i n_i sigma_i^-2 a_i a_i^T. The covariance is kept current with
// Sherman-Morrison rank-one updates.
class PosteriorState {
 public:
  PosteriorState(Matrix features, Vector variances, double ridge = 1e-6);

  void update(int arm, double reward);

  const Matrix& features() const { return features_; }
  const Vector& variances() const { return variances_; }
  double ridge() const { return ridge_; }
  const Matrix& precision() const { return precision_; }
  const Matrix& covariance() const { return covariance_; }
  const Vector& moment() const { return moment_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  const Vector& sample_means() const { return sample_means_; }
  std::int64_t total_pulls() const { return total_pulls_; }
  // Solved against the precision; the cached covariance starts at 1/ridge
  // and carries rank-one rounding.
  Vector mean() const;

  // Rebuilt from (counts, sample means) alone.
  Matrix batch_precision() const;
  Vector batch_moment() const;
  // Numerical rank of the data part of the precision (ridge excluded).
  int data_rank() const;

  // Lower Cholesky factor of the covariance. Refactors the covariance from
  // the precision if rounding has made it indefinite.
  Matrix covariance_factor() const;

 private:
  Matrix features_;
  Vector variances_;
  double ridge_;
  Matrix precision_;
  Matrix covariance_;
  Vector moment_;
  std::vector<std::int64_t> counts_;
  Vector sample_means_;
  std::int64_t total_pulls_ = 0;
};

PosteriorState posterior_update(PosteriorState state, int arm, double reward);

// mean + L z, z standard normal, L L^T = covariance.
Vector posterior_sample(const PosteriorState& state, Rng& rng);

double simulate_reward(const BanditInstance& inst, int arm, Rng& rng);

struct AlternativeDraw {
  int arm = -1;  // scenario arm relative to the sampled best arm
  bool used_fallback = false;
  int attempts = 0;
};

// Draws until some arm beats the best arm of `hat`, returning the lowest
// such arm. After `max_attempts` failures it falls back to the scenario that
// minimizes D(p, x) under `hat`.
AlternativeDraw sample_alternative(const BanditInstance& hat, const Vector& p,
                                   const std::function<Vector()>& draw,
                                   int max_attempts);

// Posterior form. Draws are taken as mean + L z and tested through their
// projections onto a_x - a_best. When the union bound on accepting within
// max_attempts is below kNegligibleAcceptance the draws are skipped.
inline constexpr double kNegligibleAcceptance = 1e-12;

AlternativeDraw sample_alternative(const PosteriorState& state,
                                   const BanditInstance& hat, const Vector& p,
                                   Rng& rng, int max_attempts);

struct LearningOptions {
  double ridge = 1e-6;
  int max_attempts = 1000;
  int max_tie_redraws = 10;
  RecordSchedule schedule = RecordSchedule::geometric();
};

// Mix over arm labels, restricted to the scenarios of `inst` (its best arm
// dropped) and renormalized; uniform if no mass remains.
Vector project_mix(const BanditInstance& inst, const Vector& arm_mix);

struct LearningRun {
  std::vector<TrajectoryRecord> records;
  std::vector<int> pulls;          // every pull, warm-up included
  std::vector<int> alternatives;   // x_t per main round
  Vector arm_mix;                  // final mu over arm labels
  PosteriorState posterior;
};

// Posterior-sampling FWSP on a Gaussian linear instance. Each arm is pulled
// once in index order first (records at steps -K..-1); main rounds are
// recorded at their 1-based round index. Diagnostics use the true parameter.
LearningRun run_learning(const BanditInstance& truth, std::int64_t rounds,
                         std::uint64_t seed,
                         const LearningOptions& options = {});

}  // namespace fwsp
