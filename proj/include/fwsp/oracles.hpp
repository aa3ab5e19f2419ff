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
#include <vector>

#include "fwsp/divergences.hpp"
#include "fwsp/model.hpp"

namespace fwsp {

// Brute-force and iterative references for the closed forms and the solver.
// None of these sit on the FWSP hot path.

struct GridSolution {
  double value = 0.0;            // max over the lattice of min_x D(p, x)
  Vector p;                      // lowest-lexicographic maximizer
  Vector scenario_values;        // D(p, x) at the maximizer
  int min_scenario_arm = -1;     // arm label attaining the minimum there
  std::int64_t points = 0;
};

inline constexpr std::int64_t kMaxGridPoints = 20'000'000;

// Enumerates the lattice {c / N : c in Z_{>=0}^K, sum c = N}, N =
// round(1/resolution). Throws kTooManyGridPoints above `max_points`.
GridSolution grid_saddle_solve(const BanditInstance& inst, double resolution,
                               std::int64_t max_points = kMaxGridPoints);

// Number of lattice points for K arms at spacing 1/N.
double grid_point_count(int num_arms, std::int64_t n);

struct InnerMax {
  double value = 0.0;
  Vector p;
};

// Frank-Wolfe ascent on F(., mu) from the uniform allocation with step
// 2/(k+2), k starting at 1. The best iterate is a lower bound on
// max_q F(q, mu).
InnerMax inner_max_F(const BanditInstance& inst, const Vector& mu,
                     int iters = 10'000);

struct FdGradient {
  Vector grad;
  std::vector<bool> one_sided;
};

// Central differences on the nonnegative cone, forward differences where
// p_i < h.
FdGradient fd_gradient(const std::function<double(const Vector&)>& f,
                       const Vector& p, double h = 1e-6);

struct Projection {
  double value = 0.0;
  Vector minimizer;
};

// Accelerated projected gradient on 1/2 ||v - theta||^2_V over
// {delta^T v <= 0}, step 1/lambda_max(V).
Projection halfspace_projection(const Matrix& precision, const Vector& theta,
                                const Vector& delta, int iters = 10'000);

Projection halfspace_projection_oracle(const BanditInstance& inst,
                                       const Vector& p, const Scenario& x,
                                       int iters = 10'000);

// FWSP_THREADS if set and positive, else hardware concurrency (at least 1).
int worker_count();

}  // namespace fwsp
