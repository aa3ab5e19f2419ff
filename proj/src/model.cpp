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

#include "fwsp/model.hpp"

#include <cmath>
#include <string>

#include "fwsp/error.hpp"

namespace fwsp {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::kNonUniqueBestArm: return "NonUniqueBestArm";
    case Errc::kDomainViolation: return "DomainViolation";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kNonsmoothPoint: return "NonsmoothPoint";
    case Errc::kScenarioOutOfSpan: return "ScenarioOutOfSpan";
    case Errc::kCholeskyFailure: return "CholeskyFailure";
    case Errc::kTooManyGridPoints: return "TooManyGridPoints";
    case Errc::kMisalignedSchedules: return "MisalignedSchedules";
    case Errc::kConfig: return "ConfigError";
    case Errc::kIo: return "IoError";
  }
  return "Unknown";
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::kGaussian: return "gaussian";
    case Family::kBernoulli: return "bernoulli";
    case Family::kPoisson: return "poisson";
  }
  return "unknown";
}

namespace {

Vector default_variances(Vector variances, int num_arms) {
  if (variances.size() == 0) return Vector::Ones(num_arms);
  if (variances.size() != num_arms) {
    throw Error(Errc::kDimensionMismatch,
                "expected " + std::to_string(num_arms) + " variances, got " +
                    std::to_string(variances.size()));
  }
  for (int i = 0; i < num_arms; ++i) {
    if (!(variances(i) > 0.0) || !std::isfinite(variances(i))) {
      throw Error(Errc::kDomainViolation,
                  "variance of arm " + std::to_string(i + 1) +
                      " must be positive and finite");
    }
  }
  return variances;
}

}  // namespace

int unique_argmax(const Vector& values) {
  int best = 0;
  for (int i = 1; i < values.size(); ++i) {
    if (values(i) > values(best)) best = i;
  }
  for (int i = 0; i < values.size(); ++i) {
    if (i != best && values(i) == values(best)) {
      throw Error(Errc::kNonUniqueBestArm,
                  "arms " + std::to_string(best + 1) + " and " +
                      std::to_string(i + 1) + " tie for the largest mean");
    }
  }
  return best;
}

BanditInstance BanditInstance::unstructured(Family family, Vector theta,
                                            Vector variances) {
  const int k = static_cast<int>(theta.size());
  if (k < 2) {
    throw Error(Errc::kDimensionMismatch, "an instance needs at least 2 arms");
  }
  for (int i = 0; i < k; ++i) {
    const double m = theta(i);
    if (!std::isfinite(m)) {
      throw Error(Errc::kDomainViolation, "non-finite mean");
    }
    if (family == Family::kBernoulli && !(m > 0.0 && m < 1.0)) {
      throw Error(Errc::kDomainViolation,
                  "Bernoulli mean of arm " + std::to_string(i + 1) +
                      " must lie in (0,1)");
    }
    if (family == Family::kPoisson && !(m > 0.0)) {
      throw Error(Errc::kDomainViolation,
                  "Poisson mean of arm " + std::to_string(i + 1) +
                      " must be positive");
    }
  }
  BanditInstance inst;
  inst.kind_ = InstanceKind::kUnstructured;
  inst.family_ = family;
  inst.features_ = Matrix::Identity(k, k);
  inst.theta_ = std::move(theta);
  if (family == Family::kGaussian) {
    inst.variances_ = default_variances(std::move(variances), k);
  } else {
    // Bernoulli/Poisson variances are implied by the mean.
    inst.variances_ = Vector::Ones(k);
  }
  inst.finalize();
  return inst;
}

BanditInstance BanditInstance::linear(Matrix features, Vector theta,
                                      Vector variances) {
  const int k = static_cast<int>(features.rows());
  if (k < 2) {
    throw Error(Errc::kDimensionMismatch, "an instance needs at least 2 arms");
  }
  if (theta.size() < 1 || features.cols() != theta.size()) {
    throw Error(Errc::kDimensionMismatch,
                "features have " + std::to_string(features.cols()) +
                    " columns but theta has length " +
                    std::to_string(theta.size()));
  }
  if (!features.allFinite() || !theta.allFinite()) {
    throw Error(Errc::kDomainViolation, "non-finite features or theta");
  }
  BanditInstance inst;
  inst.kind_ = InstanceKind::kLinear;
  inst.family_ = Family::kGaussian;
  inst.features_ = std::move(features);
  inst.theta_ = std::move(theta);
  inst.variances_ = default_variances(std::move(variances), k);
  inst.finalize();
  return inst;
}

void BanditInstance::finalize() {
  means_ = is_linear() ? Vector(features_ * theta_) : theta_;
  best_arm_ = unique_argmax(means_);
  scenarios_.clear();
  scenarios_.reserve(means_.size() - 1);
  for (int i = 0; i < means_.size(); ++i) {
    if (i == best_arm_) continue;
    scenarios_.push_back({i, static_cast<int>(scenarios_.size())});
  }
}

BanditInstance BanditInstance::with_theta(Vector theta) const {
  if (is_linear()) return linear(features_, std::move(theta), variances_);
  return unstructured(family_, std::move(theta),
                      family_ == Family::kGaussian ? variances_ : Vector{});
}

BanditInstance BanditInstance::as_linear() const {
  if (is_linear()) return *this;
  if (family_ != Family::kGaussian) {
    throw Error(Errc::kDomainViolation,
                "only Gaussian instances have a linear equivalent");
  }
  return linear(Matrix::Identity(num_arms(), num_arms()), theta_, variances_);
}

Vector mean_rewards(const BanditInstance& inst) { return inst.means(); }

int best_arm(const BanditInstance& inst) { return inst.best_arm(); }

std::vector<Scenario> scenario_set(const BanditInstance& inst) {
  return inst.scenarios();
}

}  // namespace fwsp
