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

#include <algorithm>

#include "doctest.h"
#include "fwsp/model.hpp"
#include "support.hpp"

namespace fwsp {
namespace {

using testing::error_code;
using testing::vec;

TEST_SUITE("model") {

TEST_CASE("case1 instance validates with the expected means") {
  const BanditInstance inst = testing::case1();
  CHECK(inst.is_linear());
  CHECK(inst.num_arms() == 3);
  CHECK(inst.dim() == 2);
  CHECK(inst.means().isApprox(vec({1.0, 0.0, -2.0})));
  CHECK(best_arm(inst) == 0);
  const auto xs = scenario_set(inst);
  REQUIRE(xs.size() == 2);
  CHECK(xs[0].arm == 1);
  CHECK(xs[1].arm == 2);
  CHECK(xs[0].position == 0);
  CHECK(xs[1].position == 1);
}

TEST_CASE("case2 means to four decimals and best arm") {
  const BanditInstance inst = testing::case2();
  const Vector expected =
      vec({-1.0509, -2.0821, 0.2178, 0.8569, 1.4549, -1.0434});
  CHECK((mean_rewards(inst) - expected).cwiseAbs().maxCoeff() < 1e-4);
  CHECK(best_arm(inst) == 4);
  std::vector<int> arms;
  for (const Scenario& x : scenario_set(inst)) arms.push_back(x.arm);
  CHECK(arms == std::vector<int>{0, 1, 2, 3, 5});
}

TEST_CASE("bilinear example instance") {
  const BanditInstance inst = builtin("example3").instance;
  CHECK(inst.means().isApprox(vec({-1.0, -1.0, 0.0})));
  CHECK(inst.best_arm() == 2);
}

TEST_CASE("two-armed instance has a single scenario") {
  const auto inst =
      BanditInstance::unstructured(Family::kGaussian, vec({1.0, 0.0}));
  REQUIRE(inst.scenarios().size() == 1);
  CHECK(inst.scenarios()[0].arm == 1);
}

TEST_CASE("validation errors") {
  CHECK(error_code([] {
          BanditInstance::unstructured(Family::kGaussian, vec({1, 1, 0}));
        }) == Errc::kNonUniqueBestArm);
  CHECK(error_code([] {
          BanditInstance::linear(Matrix::Identity(3, 3), vec({1, 0}));
        }) == Errc::kDimensionMismatch);
  CHECK(error_code([] {
          BanditInstance::unstructured(Family::kBernoulli, vec({0.5, 1.0}));
        }) == Errc::kDomainViolation);
  CHECK(error_code([] {
          BanditInstance::unstructured(Family::kPoisson, vec({2.0, 0.0}));
        }) == Errc::kDomainViolation);
  CHECK(error_code([] {
          BanditInstance::unstructured(Family::kGaussian, vec({1, 0}),
                                       vec({1, -1}));
        }) == Errc::kDomainViolation);
  CHECK(error_code([] {
          BanditInstance::unstructured(Family::kGaussian, vec({1}));
        }).has_value());
  CHECK(error_code([] { unique_argmax(vec({0.5, 0.5})); }) ==
        Errc::kNonUniqueBestArm);
}

TEST_CASE("property: best arm is never a scenario") {
  testing::Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const int k = 2 + t % 5;
    const BanditInstance inst =
        t % 2 ? testing::random_linear(rng, k, 1 + t % 4)
              : testing::random_unstructured(rng, Family::kGaussian, k);
    const auto xs = inst.scenarios();
    CHECK(static_cast<int>(xs.size()) == k - 1);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      CHECK(xs[j].arm != inst.best_arm());
      CHECK(xs[j].position == static_cast<int>(j));
      if (j > 0) CHECK(xs[j].arm > xs[j - 1].arm);
    }
    CHECK(inst.means().maxCoeff() == inst.means()(inst.best_arm()));
  }
}

TEST_CASE("property: identity-feature conversion keeps the means") {
  testing::Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const BanditInstance u =
        testing::random_unstructured(rng, Family::kGaussian, 2 + t % 5);
    const BanditInstance l = u.as_linear();
    CHECK(l.is_linear());
    CHECK(l.means() == u.means());
    CHECK(l.best_arm() == u.best_arm());
    CHECK(l.variances() == u.variances());
  }
  // Other families have no Gaussian linear counterpart.
  const BanditInstance bern =
      testing::random_unstructured(rng, Family::kBernoulli, 3);
  CHECK(error_code([&] { bern.as_linear(); }) == Errc::kDomainViolation);
}

TEST_CASE("with_theta recomputes the best arm") {
  const BanditInstance inst = testing::case1();
  const BanditInstance moved = inst.with_theta(vec({-1.0, 0.5}));
  CHECK(moved.best_arm() == 2);
  CHECK(moved.features() == inst.features());
}

}  // TEST_SUITE

}  // namespace
}  // namespace fwsp
