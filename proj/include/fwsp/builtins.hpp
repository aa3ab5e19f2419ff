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

#include <string>
#include <string_view>
#include <vector>

#include "fwsp/model.hpp"

namespace fwsp {

// A named reference instance with its known equilibrium.
struct BuiltinInstance {
  std::string name;
  std::string description;
  BanditInstance instance;
  Vector p_star;
  Vector mu_star;
  double F_star;
  double kkt_tolerance;  // stored optima printed to 4 decimals get 1e-3
};

// "case1", "case2", "example2", "example3", "bai-fwfail".
std::vector<std::string> builtin_names();
bool is_builtin(std::string_view name);
// Throws kConfig for unknown names.
BuiltinInstance builtin(std::string_view name);

}  // namespace fwsp
