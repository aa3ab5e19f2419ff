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

#include "fwsp/self_check.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "fwsp/builtins.hpp"
#include "fwsp/divergences.hpp"
#include "fwsp/dynamics.hpp"
#include "fwsp/error.hpp"
#include "fwsp/oracles.hpp"

namespace fwsp {
namespace {

using Rng = std::mt19937_64;

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

// Interior simplex point bounded away from the faces.
Vector random_interior(int k, Rng& rng, double floor = 0.02) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector v(k);
  for (int i = 0; i < k; ++i) v(i) = floor + u(rng);
  return v / v.sum();
}

BanditInstance random_linear(Rng& rng, int k, int d) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  Matrix a(k, d);
  Vector theta(d);
  Vector var(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = z(rng);
    var(i) = u(rng);
  }
  for (int j = 0; j < d; ++j) theta(j) = z(rng);
  return BanditInstance::linear(a, theta, var);
}

BanditInstance random_unstructured(Rng& rng, Family family, int k) {
  std::uniform_real_distribution<double> u(0.1, 0.9);
  std::uniform_real_distribution<double> s(0.5, 2.0);
  Vector theta(k);
  Vector var(k);
  for (int i = 0; i < k; ++i) {
    theta(i) = family == Family::kPoisson ? 5.0 * u(rng) : u(rng);
    var(i) = s(rng);
  }
  return family == Family::kGaussian
             ? BanditInstance::unstructured(family, theta, var)
             : BanditInstance::unstructured(family, theta);
}

std::vector<BanditInstance> gradient_instances(Rng& rng) {
  std::vector<BanditInstance> out;
  out.push_back(builtin("case1").instance);
  out.push_back(builtin("case2").instance);
  out.push_back(random_linear(rng, 4, 2));
  out.push_back(random_linear(rng, 5, 5));
  out.push_back(random_unstructured(rng, Family::kGaussian, 4));
  out.push_back(random_unstructured(rng, Family::kBernoulli, 3));
  out.push_back(random_unstructured(rng, Family::kPoisson, 5));
  return out;
}

CheckResult check_builtin_kkt() {
  CheckResult r{"builtin optima satisfy KKT", true, ""};
  for (const auto& name : builtin_names()) {
    const BuiltinInstance b = builtin(name);
    const KktResiduals k = kkt_residuals(b.instance, b.p_star, b.mu_star);
    const double worst = std::max(k.experimenter, k.skeptic);
    const double f = payoff_F(b.instance, b.p_star, b.mu_star);
    if (worst > b.kkt_tolerance || std::abs(f - b.F_star) > b.kkt_tolerance) {
      r.passed = false;
      r.detail += name + fmt(" residual %.3g, F %.6g; ", worst, f);
    }
  }
  return r;
}

CheckResult check_gradients() {
  CheckResult r{"gradients match finite differences", true, ""};
  Rng rng(11);
  double worst_rel = 0.0;
  double worst_euler = 0.0;
  for (const BanditInstance& inst : gradient_instances(rng)) {
    for (int t = 0; t < 10; ++t) {
      const Vector p = random_interior(inst.num_arms(), rng);
      for (const Scenario& x : inst.scenarios()) {
        const Vector g = d_grad(inst, p, x);
        const double d = d_value(inst, p, x);
        const FdGradient fd = fd_gradient(
            [&](const Vector& q) { return d_value(inst, q, x); }, p, 1e-5);
        const double rel =
            (g - fd.grad).norm() / std::max(1e-8, fd.grad.norm());
        worst_rel = std::max(worst_rel, rel);
        worst_euler = std::max(worst_euler, std::abs(p.dot(g) - d));
      }
    }
  }
  r.passed = worst_rel <= 1e-5 && worst_euler <= 1e-9;
  r.detail = fmt("max rel err %.2g, max |p.grad - D| %.2g", worst_rel,
                 worst_euler);
  return r;
}

CheckResult check_homogeneity() {
  CheckResult r{"D is positively homogeneous", true, ""};
  Rng rng(12);
  double worst = 0.0;
  for (const BanditInstance& inst : gradient_instances(rng)) {
    const Vector p = random_interior(inst.num_arms(), rng);
    for (const Scenario& x : inst.scenarios()) {
      const double d = d_value(inst, p, x);
      for (double c : {0.25, 3.0, 17.5}) {
        worst = std::max(worst, std::abs(d_value(inst, c * p, x) - c * d) /
                                    std::max(1.0, c * d));
      }
    }
  }
  r.passed = worst <= 1e-10;
  r.detail = fmt("max rel deviation %.2g", worst);
  return r;
}

CheckResult check_oracle_equivalence() {
  CheckResult r{"linear and unstructured forms agree", true, ""};
  Rng rng(13);
  double worst_id = 0.0;
  double worst_proj = 0.0;
  for (int t = 0; t < 20; ++t) {
    const BanditInstance u = random_unstructured(rng, Family::kGaussian, 4);
    const BanditInstance l = u.as_linear();
    const Vector p = random_interior(4, rng);
    for (const Scenario& x : u.scenarios()) {
      worst_id = std::max(worst_id, std::abs(d_value_unstructured(u, p, x) -
                                             d_value_linear(l, p, x)));
    }
  }
  for (int t = 0; t < 10; ++t) {
    const BanditInstance inst = random_linear(rng, 4, 3);
    const Vector p = random_interior(4, rng);
    for (const Scenario& x : inst.scenarios()) {
      const Projection proj = halfspace_projection_oracle(inst, p, x);
      worst_proj = std::max(worst_proj,
                            std::abs(proj.value - d_value_linear(inst, p, x)));
    }
  }
  r.passed = worst_id <= 1e-10 && worst_proj <= 1e-7;
  r.detail = fmt("identity features %.2g, halfspace projection %.2g",
                 worst_id, worst_proj);
  return r;
}

CheckResult check_gap_sandwich() {
  CheckResult r{"gap lies between 0 and V", true, ""};
  const BanditInstance inst = builtin("case1").instance;
  Rng rng(14);
  double worst = -1.0;
  for (int t = 0; t < 20; ++t) {
    const Vector p = random_interior(3, rng);
    const Vector mu = random_interior(2, rng);
    const double inner = inner_max_F(inst, mu, 2000).value;
    const double min_d = evaluate_scenarios(inst, p, false).values.minCoeff();
    const double gap = inner - min_d;
    const double v = lyapunov_V(inst, p, mu);
    worst = std::max({worst, -gap, gap - v - 1e-6});
  }
  r.passed = worst <= 0.0;
  r.detail = fmt("worst violation %.2g", std::max(worst, 0.0));
  return r;
}

CheckResult check_dynamics() {
  CheckResult r{"FWSP keeps simplex iterates and converges on case1", true,
                ""};
  const BanditInstance inst = builtin("case1").instance;
  IterateState s = uniform_state(inst);
  double worst = 0.0;
  for (int n = 0; n < 2000; ++n) {
    s = fwsp_step(inst, s).state;
    worst = std::max({worst, std::abs(s.p.sum() - 1.0),
                      std::abs(s.mu.sum() - 1.0)});
    if (s.p.minCoeff() <= 0.0 || s.mu.minCoeff() < 0.0) r.passed = false;
  }
  const auto rec = run_fwsp(inst, uniform_state(inst), 20000);
  const double f = rec.back().F;
  r.passed = r.passed && worst <= 1e-12 && std::abs(f - 2.0 / 9.0) <= 0.02;
  r.detail = fmt("simplex drift %.2g, F after 2e4 steps %.6g", worst, f);
  return r;
}

CheckResult check_flow() {
  CheckResult r{"Euler flow decays V", true, ""};
  const BanditInstance inst = builtin("case1").instance;
  const auto rec = euler_flow(inst, Vector::Constant(3, 1.0 / 3.0),
                              Vector::Constant(2, 0.5), 1e-3, 5.0);
  const double v0 = rec.front().V.value_or(0.0);
  for (const TrajectoryRecord& t : rec) {
    if (!t.V) continue;
    if (*t.V > 1.2 * v0 * std::exp(-t.step) + 1e-3) r.passed = false;
  }
  r.detail = fmt("V(0) %.4g, V(5) %.3g", v0, rec.back().V.value_or(NAN));
  return r;
}

CheckResult check_grid() {
  CheckResult r{"grid solver recovers case1 value", true, ""};
  const GridSolution g = grid_saddle_solve(builtin("case1").instance, 1e-2);
  r.passed = std::abs(g.value - 2.0 / 9.0) <= 0.01;
  r.detail = fmt("grid value %.6g", g.value);
  return r;
}

template <class Fn>
CheckResult guarded(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return CheckResult{name, false, std::string("threw: ") + e.what()};
  }
}

}  // namespace

std::vector<CheckResult> run_self_check() {
  std::vector<CheckResult> out;
  out.push_back(guarded("builtin KKT", check_builtin_kkt));
  out.push_back(guarded("gradients", check_gradients));
  out.push_back(guarded("homogeneity", check_homogeneity));
  out.push_back(guarded("oracle equivalence", check_oracle_equivalence));
  out.push_back(guarded("gap sandwich", check_gap_sandwich));
  out.push_back(guarded("dynamics", check_dynamics));
  out.push_back(guarded("flow", check_flow));
  out.push_back(guarded("grid", check_grid));
  return out;
}

}  // namespace fwsp
