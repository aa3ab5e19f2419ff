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

// Shared generators and helpers for the unit tests.
#pragma once

#include <cmath>
#include <optional>
#include <random>

#include "fwsp/builtins.hpp"
#include "fwsp/error.hpp"
#include "fwsp/model.hpp"

namespace fwsp::testing {

using Rng = std::mt19937_64;

// Code of the fwsp::Error thrown by fn, or nullopt if it returns normally.
template <class Fn>
std::optional<Errc> error_code(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Vector random_interior(int k, Rng& rng, double floor = 0.02) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector v(k);
  for (int i = 0; i < k; ++i) v(i) = floor + u(rng);
  return v / v.sum();
}

inline BanditInstance random_linear(Rng& rng, int k, int d,
                                    bool unit_variance = false) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  Matrix a(k, d);
  Vector theta(d);
  Vector var = Vector::Ones(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = z(rng);
    if (!unit_variance) var(i) = u(rng);
  }
  for (int j = 0; j < d; ++j) theta(j) = z(rng);
  return BanditInstance::linear(a, theta, var);
}

inline BanditInstance random_unstructured(Rng& rng, Family family, int k) {
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

inline BanditInstance case1() { return builtin("case1").instance; }
inline BanditInstance case2() { return builtin("case2").instance; }

inline BanditInstance bai3() {
  return BanditInstance::unstructured(Family::kGaussian, vec({1.0, 0.0, 0.0}));
}

}  // namespace fwsp::testing
