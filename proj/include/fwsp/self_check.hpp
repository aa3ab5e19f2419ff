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
#include <vector>

namespace fwsp {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Quick invariant sweep over the builtin instances: stored optima, gradient
// identities, oracle agreement, simplex bookkeeping. Takes a few seconds.
std::vector<CheckResult> run_self_check();

}  // namespace fwsp
