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

#include <Eigen/Core>
#include <string_view>
#include <vector>

namespace fwsp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class InstanceKind { kUnstructured, kLinear };
enum class Family { kGaussian, kBernoulli, kPoisson };

std::string_view family_name(Family family);

// A confusing scenario x != I*. `arm` is the 0-based arm index, `position`
// its slot in every ScenarioMix (ascending arm order).
struct Scenario {
  int arm = 0;
  int position = 0;
};

// Immutable, validated problem description. Unstructured instances keep
// their own closed forms; as_linear() exists for cross-checking only.
class BanditInstance {
 public:
  // Throws fwsp::Error on any invariant violation.
  static BanditInstance unstructured(Family family, Vector theta,
                                     Vector variances = {});
  static BanditInstance linear(Matrix features, Vector theta,
                               Vector variances = {});

  InstanceKind kind() const { return kind_; }
  Family family() const { return family_; }
  bool is_linear() const { return kind_ == InstanceKind::kLinear; }

  int num_arms() const { return static_cast<int>(means_.size()); }
  int dim() const { return static_cast<int>(theta_.size()); }
  int num_scenarios() const { return num_arms() - 1; }

  // K x d; identity for unstructured instances.
  const Matrix& features() const { return features_; }
  const Vector& theta() const { return theta_; }
  const Vector& variances() const { return variances_; }
  const Vector& means() const { return means_; }
  int best_arm() const { return best_arm_; }
  const std::vector<Scenario>& scenarios() const { return scenarios_; }

  // Same features, variances and family with a different parameter. Used by
  // posterior sampling, where each draw defines its own best arm.
  BanditInstance with_theta(Vector theta) const;

  // Identity-feature Gaussian linear instance with the same means.
  BanditInstance as_linear() const;

 private:
  BanditInstance() = default;
  void finalize();

  InstanceKind kind_ = InstanceKind::kUnstructured;
  Family family_ = Family::kGaussian;
  Matrix features_;
  Vector theta_;
  Vector variances_;
  Vector means_;
  int best_arm_ = 0;
  std::vector<Scenario> scenarios_;
};

// Free-function forms of the accessors above. Validation happens in the
// BanditInstance factories; there is no unvalidated instance to check.
Vector mean_rewards(const BanditInstance& inst);
int best_arm(const BanditInstance& inst);
std::vector<Scenario> scenario_set(const BanditInstance& inst);

// Index of the unique maximum of `values`; throws kNonUniqueBestArm on an
// exact tie.
int unique_argmax(const Vector& values);

}  // namespace fwsp
