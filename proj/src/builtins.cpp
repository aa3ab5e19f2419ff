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

#include "fwsp/builtins.hpp"

#include <cmath>

#include "fwsp/error.hpp"

namespace fwsp {

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// Three arms in R^2 with theta = e1: a1 = e1, a2 = e2, a3 = third * e1.
BanditInstance three_arm_plane(double third) {
  Matrix a(3, 2);
  a << 1, 0,
       0, 1,
       third, 0;
  return BanditInstance::linear(a, vec({1, 0}));
}

BuiltinInstance case1() {
  return {"case1",
          "linear, theta = e1, a = (e1, e2, -2 e1); optimum (0, 2/3, 1/3)",
          three_arm_plane(-2.0),
          vec({0.0, 2.0 / 3.0, 1.0 / 3.0}),
          vec({1.0, 0.0}),
          2.0 / 9.0,
          1e-6};
}

BuiltinInstance case2() {
  Matrix a(6, 3);
  a << -0.7322, -0.7272, -0.0976,
       -0.9580, -0.2982,  0.8227,
       -0.0585, -0.8511,  0.1397,
        0.2705, -0.8211,  0.1124,
        0.5793, -0.5567, -0.1627,
       -0.5004, -0.4163,  0.6065;
  return {"case2",
          "random linear instance, K = 6, d = 3, best arm 5",
          BanditInstance::linear(a, vec({1.9492, -0.4601, -0.4279})),
          vec({0.3122, 0.3856, 0.0, 0.3022, 0.0, 0.0}),
          vec({0.5149, 0.0, 0.0, 0.4851, 0.0}),
          0.5037,
          1e-3};
}

BuiltinInstance example2() {
  // Optimal for every z in [0, 1/2] at (z, 1/2, 1/2 - z); z = 1/4 stored.
  return {"example2",
          "linear, theta = e1, a = (e1, e2, -e1); continuum of optima",
          three_arm_plane(-1.0),
          vec({0.25, 0.5, 0.25}),
          vec({1.0, 0.0}),
          0.125,
          1e-6};
}

BuiltinInstance example3() {
  Matrix a(3, 2);
  a << -1, 0,
       0, -1,
       0, 0;
  return {"example3",
          "linear, theta = (1, 1), a = (-e1, -e2, 0); bilinear payoff",
          BanditInstance::linear(a, vec({1, 1})),
          vec({0.5, 0.5, 0.0}),
          vec({0.5, 0.5}),
          0.25,
          1e-6};
}

BuiltinInstance bai_fwfail() {
  const double r = std::sqrt(2.0);
  return {"bai-fwfail",
          "unstructured Gaussian BAI, theta = (1, 0, 0), unit variance",
          BanditInstance::unstructured(Family::kGaussian, vec({1, 0, 0})),
          vec({r - 1.0, 1.0 - r / 2.0, 1.0 - r / 2.0}),
          vec({0.5, 0.5}),
          // (1/2) p1 p2 / (p1 + p2) at the optimum
          0.5 * (r - 1.0) * (1.0 - r / 2.0) / (r / 2.0),
          1e-6};
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"case1", "case2", "example2", "example3", "bai-fwfail"};
}

bool is_builtin(std::string_view name) {
  for (const auto& n : builtin_names()) {
    if (n == name) return true;
  }
  return false;
}

BuiltinInstance builtin(std::string_view name) {
  if (name == "case1") return case1();
  if (name == "case2") return case2();
  if (name == "example2") return example2();
  if (name == "example3") return example3();
  if (name == "bai-fwfail") return bai_fwfail();
  throw Error(Errc::kConfig, "unknown builtin instance '" +
                                 std::string(name) + "'");
}

}  // namespace fwsp
