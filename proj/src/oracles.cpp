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

#include "fwsp/oracles.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "fwsp/dynamics.hpp"
#include "fwsp/error.hpp"

namespace fwsp {

int worker_count() {
  if (const char* env = std::getenv("FWSP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double grid_point_count(int num_arms, std::int64_t n) {
  // C(n + K - 1, K - 1)
  double count = 1.0;
  for (int j = 1; j < num_arms; ++j) {
    count *= static_cast<double>(n + j) / static_cast<double>(j);
  }
  return std::round(count);
}

namespace {

struct ShardBest {
  double value = -1.0;
  std::vector<int> counts;
  std::int64_t points = 0;
};

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// All compositions with counts[0] == first, visited in lexicographic order.
void scan_shard(const BanditInstance& inst, int n, int first,
                ShardBest& best) {
  const int k = inst.num_arms();
  std::vector<int> counts(k, 0);
  counts[0] = first;
  Vector p(k);
  const double scale = 1.0 / n;

  std::function<void(int, int)> recurse = [&](int pos, int remaining) {
    if (pos == k - 1) {
      counts[pos] = remaining;
      for (int i = 0; i < k; ++i) p(i) = counts[i] * scale;
      const double g = evaluate_scenarios(inst, p, false).values.minCoeff();
      ++best.points;
      if (g > best.value) {
        best.value = g;
        best.counts = counts;
      }
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[pos] = c;
      recurse(pos + 1, remaining - c);
    }
  };
  recurse(1, n - first);
}

}  // namespace

GridSolution grid_saddle_solve(const BanditInstance& inst, double resolution,
                               std::int64_t max_points) {
  if (!(resolution > 0.0 && resolution <= 1.0)) {
    throw Error(Errc::kDomainViolation, "resolution must lie in (0, 1]");
  }
  const auto n = static_cast<int>(std::llround(1.0 / resolution));
  const int k = inst.num_arms();
  const double total = grid_point_count(k, n);
  if (total > static_cast<double>(max_points)) {
    throw Error(Errc::kTooManyGridPoints,
                "lattice with " + std::to_string(k) + " arms at spacing 1/" +
                    std::to_string(n) + " has " +
                    std::to_string(static_cast<long long>(total)) + " points");
  }

  std::vector<ShardBest> shards(n + 1);
  const int workers = std::min(worker_count(), n + 1);
  auto work = [&](int worker) {
    for (int first = worker; first <= n; first += workers) {
      scan_shard(inst, n, first, shards[first]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  // Shards are in increasing lexicographic order already.
  ShardBest best;
  for (const ShardBest& shard : shards) {
    best.points += shard.points;
    if (shard.value > best.value ||
        (shard.value == best.value && lex_less(shard.counts, best.counts))) {
      best.value = shard.value;
      best.counts = shard.counts;
    }
  }

  GridSolution out;
  out.value = best.value;
  out.points = best.points;
  out.p.resize(k);
  for (int i = 0; i < k; ++i) out.p(i) = static_cast<double>(best.counts[i]) / n;
  const ScenarioTable table = evaluate_scenarios(inst, out.p, false);
  out.scenario_values = table.values;
  out.min_scenario_arm = inst.scenarios()[table.argmin()].arm;
  return out;
}

InnerMax inner_max_F(const BanditInstance& inst, const Vector& mu,
                     int iters) {
  if (iters < 100) {
    throw Error(Errc::kDomainViolation, "inner_max_F needs at least 100 iterations");
  }
  check_simplex(mu, inst.num_scenarios(), "scenario mix");
  const int k = inst.num_arms();

  auto ascend = [&](Vector p) {
    InnerMax best{payoff_F(inst, p, mu), p};
    for (int it = 1; it <= iters; ++it) {
      const ScenarioTable table = evaluate_scenarios(inst, p, true);
      const int vertex = argmax_lowest(grad_p_F(table, mu));
      const double step = 2.0 / (it + 2.0);
      p *= 1.0 - step;
      p(vertex) += step;
      const double value = payoff_F(inst, p, mu);
      if (value > best.value) best = {value, p};
    }
    return best;
  };

  const Vector uniform = Vector::Constant(k, 1.0 / k);
  try {
    return ascend(uniform);
  } catch (const Error& e) {
    if (e.code() != Errc::kNonsmoothPoint &&
        e.code() != Errc::kScenarioOutOfSpan) {
      throw;
    }
  }
  // One restart from a perturbed interior point.
  Vector perturbed = uniform;
  for (int i = 0; i < k; ++i) perturbed(i) *= 1.0 + 1e-3 * (i + 1);
  return ascend(perturbed / perturbed.sum());
}

FdGradient fd_gradient(const std::function<double(const Vector&)>& f,
                       const Vector& p, double h) {
  if (!(h >= 1e-8 && h <= 1e-4)) {
    throw Error(Errc::kDomainViolation, "finite-difference step must lie in [1e-8, 1e-4]");
  }
  const int k = static_cast<int>(p.size());
  FdGradient out{Vector(k), std::vector<bool>(k, false)};
  Vector probe = p;
  const double center = f(p);
  for (int i = 0; i < k; ++i) {
    probe(i) = p(i) + h;
    const double up = f(probe);
    if (p(i) < h) {
      out.grad(i) = (up - center) / h;
      out.one_sided[i] = true;
    } else {
      probe(i) = p(i) - h;
      out.grad(i) = (up - f(probe)) / (2.0 * h);
    }
    probe(i) = p(i);
  }
  return out;
}

Projection halfspace_projection(const Matrix& precision, const Vector& theta,
                                const Vector& delta, int iters) {
  const double delta_sq = delta.squaredNorm();
  auto project = [&](const Vector& v) -> Vector {
    const double excess = delta.dot(v);
    if (excess <= 0.0 || delta_sq == 0.0) return v;
    return v - (excess / delta_sq) * delta;
  };
  auto objective = [&](const Vector& v) {
    const Vector diff = v - theta;
    return 0.5 * diff.dot(precision * diff);
  };

  Eigen::SelfAdjointEigenSolver<Matrix> eig(precision, Eigen::EigenvaluesOnly);
  const double lipschitz = eig.eigenvalues().maxCoeff();
  Vector current = project(theta);
  if (!(lipschitz > 0.0)) return {objective(current), current};

  Vector previous = current;
  Vector best = current;
  double best_value = objective(current);
  double momentum = 1.0;
  for (int it = 0; it < iters; ++it) {
    const double next_momentum =
        0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const Vector look =
        current + ((momentum - 1.0) / next_momentum) * (current - previous);
    previous = current;
    current = project(look - (precision * (look - theta)) / lipschitz);
    momentum = next_momentum;
    const double value = objective(current);
    if (value < best_value) {
      best_value = value;
      best = current;
    }
  }
  return {best_value, best};
}

Projection halfspace_projection_oracle(const BanditInstance& inst,
                                       const Vector& p, const Scenario& x,
                                       int iters) {
  if (!inst.is_linear()) {
    throw Error(Errc::kDomainViolation,
                "the halfspace oracle needs a linear instance");
  }
  const Vector weights = p.cwiseQuotient(inst.variances());
  const Matrix precision =
      inst.features().transpose() * weights.asDiagonal() * inst.features();
  const Vector delta = inst.features().row(inst.best_arm()).transpose() -
                       inst.features().row(x.arm).transpose();
  return halfspace_projection(precision, inst.theta(), delta, iters);
}

}  // namespace fwsp
