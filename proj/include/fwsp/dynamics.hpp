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
#include <optional>
#include <vector>

#include "fwsp/divergences.hpp"
#include "fwsp/model.hpp"

namespace fwsp {

// (n, p, mu). The next step moves both simplex points by 1/(n+1).
struct IterateState {
  std::int64_t n = 0;
  Vector p;
  Vector mu;
};

// Uniform (p, mu) at counter `n`. With n >= 1 the start keeps weight in
// every later iterate, so p stays strictly positive.
IterateState uniform_state(const BanditInstance& inst, std::int64_t n = 1);

struct TrajectoryRecord {
  double step = 0.0;  // steps taken, or time for the continuous flow
  double F = 0.0;
  std::optional<double> V;  // empty where the gradient is undefined
  double gap_lb = 0.0;      // F - min_x D(p, x)
  Vector p;
  Vector mu;
  int pulled_arm = -1;       // 0-based; -1 when no arm was pulled
  int chosen_scenario = -1;  // arm label of the scenario; -1 when none
  std::optional<bool> used_fallback;
  std::optional<int> posterior_rank;
};

// Which steps to record: powers of two plus the final step, or an explicit
// list of step indices.
class RecordSchedule {
 public:
  static RecordSchedule geometric() { return RecordSchedule(); }
  static RecordSchedule at(std::vector<std::int64_t> steps);

  bool is_geometric() const { return geometric_; }
  const std::vector<std::int64_t>& steps() const { return steps_; }
  bool contains(std::int64_t step, std::int64_t last) const;

 private:
  bool geometric_ = true;
  std::vector<std::int64_t> steps_;
};

// Lowest index attaining the maximum / minimum.
int argmax_lowest(const Vector& values);
int argmin_lowest(const Vector& values);

int select_arm(const BanditInstance& inst, const Vector& p, const Vector& mu);
Scenario select_scenario(const BanditInstance& inst, const Vector& p);

struct StepResult {
  IterateState state;
  int pulled_arm;
  Scenario chosen_scenario;
};

// One simultaneous FWSP step: both selections are made at (p_n, mu_n).
StepResult fwsp_step(const BanditInstance& inst, const IterateState& state);

std::vector<TrajectoryRecord> run_fwsp(
    const BanditInstance& inst, const IterateState& start,
    std::int64_t n_iters,
    const RecordSchedule& schedule = RecordSchedule::geometric());

struct Diagnostics {
  double F = 0.0;
  std::optional<double> V;
  double gap_lb = 0.0;
};

Diagnostics diagnose(const BanditInstance& inst, const Vector& p,
                     const Vector& mu);
Diagnostics diagnose(const ScenarioTable& table, const Vector& p,
                     const Vector& mu);

// (max_i g_i - p.g) + (mu.D - min_x D) with g = grad_p F.
double lyapunov_V(const BanditInstance& inst, const Vector& p,
                  const Vector& mu);

struct KktResiduals {
  double experimenter = 0.0;
  double skeptic = 0.0;
};

KktResiduals kkt_residuals(const BanditInstance& inst, const Vector& p,
                           const Vector& mu);

// Explicit Euler for dp/dt = e_i - p, dmu/dt = e_x - mu with the same vertex
// selections as the discrete dynamics. Records t = 0 and every ceil(1/h)-th
// step after it.
std::vector<TrajectoryRecord> euler_flow(const BanditInstance& inst,
                                         const Vector& p0, const Vector& mu0,
                                         double h, double horizon);

}  // namespace fwsp
