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

#include "fwsp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fwsp/error.hpp"

namespace fwsp {

IterateState uniform_state(const BanditInstance& inst, std::int64_t n) {
  const int k = inst.num_arms();
  const int m = inst.num_scenarios();
  return {n, Vector::Constant(k, 1.0 / k), Vector::Constant(m, 1.0 / m)};
}

RecordSchedule RecordSchedule::at(std::vector<std::int64_t> steps) {
  RecordSchedule schedule;
  schedule.geometric_ = false;
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  schedule.steps_ = std::move(steps);
  return schedule;
}

bool RecordSchedule::contains(std::int64_t step, std::int64_t last) const {
  if (geometric_) {
    return step == last || (step > 0 && (step & (step - 1)) == 0);
  }
  return std::binary_search(steps_.begin(), steps_.end(), step);
}

int argmax_lowest(const Vector& values) {
  int best = 0;
  for (int i = 1; i < values.size(); ++i) {
    if (values(i) > values(best)) best = i;
  }
  return best;
}

int argmin_lowest(const Vector& values) {
  int best = 0;
  for (int i = 1; i < values.size(); ++i) {
    if (values(i) < values(best)) best = i;
  }
  return best;
}

int select_arm(const BanditInstance& inst, const Vector& p, const Vector& mu) {
  return argmax_lowest(grad_p_F(inst, p, mu));
}

Scenario select_scenario(const BanditInstance& inst, const Vector& p) {
  const ScenarioTable table = evaluate_scenarios(inst, p, false);
  return inst.scenarios()[table.argmin()];
}

namespace {

void check_state(const BanditInstance& inst, const IterateState& state) {
  if (state.n < 0) {
    throw Error(Errc::kDomainViolation, "iteration counter must be >= 0");
  }
  check_simplex(state.p, inst.num_arms(), "allocation");
  check_simplex(state.mu, inst.num_scenarios(), "scenario mix");
}

// v <- (n v + e_j) / (n + 1)
void one_hot_average(Vector& v, int j, std::int64_t n) {
  const double step = 1.0 / static_cast<double>(n + 1);
  v *= static_cast<double>(n) * step;
  v(j) += step;
}

// v <- v + h (e_j - v)
void euler_move(Vector& v, int j, double h) {
  v *= 1.0 - h;
  v(j) += h;
}

TrajectoryRecord make_record(double step, const Diagnostics& diag,
                             const Vector& p, const Vector& mu, int arm,
                             int scenario_arm) {
  TrajectoryRecord rec;
  rec.step = step;
  rec.F = diag.F;
  rec.V = diag.V;
  rec.gap_lb = diag.gap_lb;
  rec.p = p;
  rec.mu = mu;
  rec.pulled_arm = arm;
  rec.chosen_scenario = scenario_arm;
  return rec;
}

}  // namespace

StepResult fwsp_step(const BanditInstance& inst, const IterateState& state) {
  check_state(inst, state);
  const ScenarioTable table = evaluate_scenarios(inst, state.p, true);
  const int arm = argmax_lowest(grad_p_F(table, state.mu));
  const Scenario scenario = inst.scenarios()[table.argmin()];

  StepResult out{state, arm, scenario};
  one_hot_average(out.state.p, arm, state.n);
  one_hot_average(out.state.mu, scenario.position, state.n);
  ++out.state.n;
  return out;
}

Diagnostics diagnose(const ScenarioTable& table, const Vector& p,
                     const Vector& mu) {
  Diagnostics diag;
  diag.F = payoff_F(table, mu);
  const double min_d = table.values.minCoeff();
  diag.gap_lb = diag.F - min_d;
  try {
    const Vector g = grad_p_F(table, mu);
    diag.V = (g.maxCoeff() - p.dot(g)) + (diag.F - min_d);
  } catch (const Error& e) {
    if (e.code() != Errc::kNonsmoothPoint) throw;
  }
  return diag;
}

Diagnostics diagnose(const BanditInstance& inst, const Vector& p,
                     const Vector& mu) {
  return diagnose(evaluate_scenarios(inst, p, true), p, mu);
}

double lyapunov_V(const BanditInstance& inst, const Vector& p,
                  const Vector& mu) {
  check_simplex(p, inst.num_arms(), "allocation");
  check_simplex(mu, inst.num_scenarios(), "scenario mix");
  const ScenarioTable table = evaluate_scenarios(inst, p, true);
  const Vector g = grad_p_F(table, mu);
  const double f = payoff_F(table, mu);
  return (g.maxCoeff() - p.dot(g)) + (f - table.values.minCoeff());
}

KktResiduals kkt_residuals(const BanditInstance& inst, const Vector& p,
                           const Vector& mu) {
  check_simplex(p, inst.num_arms(), "allocation");
  check_simplex(mu, inst.num_scenarios(), "scenario mix");
  const ScenarioTable table = evaluate_scenarios(inst, p, true);
  const Vector g = grad_p_F(table, mu);
  const double f = payoff_F(table, mu);

  KktResiduals r;
  const Eigen::ArrayXd arm_excess = g.array() - f;
  r.experimenter = (p.array() * arm_excess).abs().maxCoeff() +
                   std::max(0.0, arm_excess.maxCoeff());
  const Eigen::ArrayXd scenario_excess = table.values.array() - f;
  r.skeptic = std::max(0.0, -scenario_excess.minCoeff()) +
              (mu.array() * scenario_excess).abs().maxCoeff();
  return r;
}

std::vector<TrajectoryRecord> run_fwsp(const BanditInstance& inst,
                                       const IterateState& start,
                                       std::int64_t n_iters,
                                       const RecordSchedule& schedule) {
  if (n_iters < 1) {
    throw Error(Errc::kDomainViolation, "n_iters must be >= 1");
  }
  check_state(inst, start);

  std::vector<TrajectoryRecord> records;
  IterateState state = start;
  ScenarioTable table = evaluate_scenarios(inst, state.p, true);
  for (std::int64_t k = 1; k <= n_iters; ++k) {
    const int arm = argmax_lowest(grad_p_F(table, state.mu));
    const Scenario scenario = inst.scenarios()[table.argmin()];
    one_hot_average(state.p, arm, state.n);
    one_hot_average(state.mu, scenario.position, state.n);
    ++state.n;

    table = evaluate_scenarios(inst, state.p, true);
    if (schedule.contains(k, n_iters)) {
      records.push_back(make_record(static_cast<double>(k),
                                    diagnose(table, state.p, state.mu),
                                    state.p, state.mu, arm, scenario.arm));
    }
  }
  return records;
}

std::vector<TrajectoryRecord> euler_flow(const BanditInstance& inst,
                                         const Vector& p0, const Vector& mu0,
                                         double h, double horizon) {
  if (!(h > 0.0 && h < 1.0)) {
    throw Error(Errc::kDomainViolation, "Euler step must lie in (0, 1)");
  }
  if (!(horizon >= 0.0)) {
    throw Error(Errc::kDomainViolation, "horizon must be nonnegative");
  }
  check_simplex(p0, inst.num_arms(), "initial allocation");
  check_simplex(mu0, inst.num_scenarios(), "initial scenario mix");
  if ((p0.array() <= 0.0).any()) {
    throw Error(Errc::kDomainViolation,
                "the flow must start from a strictly positive allocation");
  }

  const auto n_steps = static_cast<std::int64_t>(std::llround(horizon / h));
  const auto stride = static_cast<std::int64_t>(std::ceil(1.0 / h - 1e-9));

  Vector p = p0;
  Vector mu = mu0;
  ScenarioTable table = evaluate_scenarios(inst, p, true);
  std::vector<TrajectoryRecord> records;
  records.push_back(make_record(0.0, diagnose(table, p, mu), p, mu, -1, -1));
  for (std::int64_t k = 1; k <= n_steps; ++k) {
    const int arm = argmax_lowest(grad_p_F(table, mu));
    const Scenario scenario = inst.scenarios()[table.argmin()];
    euler_move(p, arm, h);
    euler_move(mu, scenario.position, h);
    table = evaluate_scenarios(inst, p, true);
    if (k % stride == 0 || k == n_steps) {
      records.push_back(make_record(static_cast<double>(k) * h,
                                    diagnose(table, p, mu), p, mu, arm,
                                    scenario.arm));
    }
  }
  return records;
}

}  // namespace fwsp
