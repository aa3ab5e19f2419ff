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

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "fwsp/fwsp.h"

namespace {

TEST_SUITE("capi") {

TEST_CASE("builtin instance round trip") {
  fwsp_instance* inst = nullptr;
  REQUIRE(fwsp_instance_create_builtin("case1", &inst) == FWSP_OK);
  CHECK(fwsp_instance_num_arms(inst) == 3);
  CHECK(fwsp_instance_dim(inst) == 2);
  CHECK(fwsp_instance_best_arm(inst) == 0);

  double means[3];
  REQUIRE(fwsp_instance_means(inst, means, 3) == FWSP_OK);
  CHECK(means[2] == -2.0);
  int xs[2];
  REQUIRE(fwsp_instance_scenarios(inst, xs, 2) == FWSP_OK);
  CHECK(xs[0] == 1);
  CHECK(xs[1] == 2);
  CHECK(fwsp_instance_scenarios(inst, xs, 1) == FWSP_ERR_INVALID_ARGUMENT);

  const double p[3] = {0.0, 2.0 / 3, 1.0 / 3};
  const double mu[2] = {1.0, 0.0};
  double value = 0.0;
  REQUIRE(fwsp_d_value(inst, p, 1, &value) == FWSP_OK);
  CHECK(value == doctest::Approx(2.0 / 9));
  double grad[3];
  REQUIRE(fwsp_d_grad(inst, p, 1, grad) == FWSP_OK);
  CHECK(grad[0] == doctest::Approx(1.0 / 18));
  REQUIRE(fwsp_payoff(inst, p, mu, &value) == FWSP_OK);
  CHECK(value == doctest::Approx(2.0 / 9));
  REQUIRE(fwsp_lyapunov(inst, p, mu, &value) == FWSP_OK);
  CHECK(std::abs(value) < 1e-12);
  double e = 1.0;
  double s = 1.0;
  REQUIRE(fwsp_kkt_residuals(inst, p, mu, &e, &s) == FWSP_OK);
  CHECK(e < 1e-12);
  CHECK(s < 1e-12);
  double p_star[3];
  REQUIRE(fwsp_grid_solve(inst, 1e-2, &value, p_star) == FWSP_OK);
  CHECK(std::abs(value - 2.0 / 9) < 1e-3);
  fwsp_instance_destroy(inst);
}

TEST_CASE("errors map to status codes and messages") {
  fwsp_instance* inst = nullptr;
  CHECK(fwsp_instance_create_builtin("nope", &inst) == FWSP_ERR_CONFIG);
  CHECK(inst == nullptr);
  CHECK(std::string(fwsp_last_error_message()).find("nope") !=
        std::string::npos);
  CHECK(fwsp_instance_create_json(
            R"({"kind": "unstructured", "theta": [1, 1]})", &inst) ==
        FWSP_ERR_NON_UNIQUE_BEST_ARM);
  CHECK(fwsp_instance_create_builtin(nullptr, &inst) ==
        FWSP_ERR_INVALID_ARGUMENT);

  REQUIRE(fwsp_instance_create_json(
              R"({"kind": "unstructured", "theta": [1, 0, 0]})", &inst) ==
          FWSP_OK);
  const double corner[3] = {0.0, 0.0, 1.0};
  double grad[3];
  CHECK(fwsp_d_grad(inst, corner, 1, grad) == FWSP_ERR_NONSMOOTH);
  CHECK(fwsp_d_grad(inst, corner, 0, grad) == FWSP_ERR_INVALID_ARGUMENT);
  const double bad[3] = {0.5, 0.5, 0.5};
  const double mu[2] = {0.5, 0.5};
  double v;
  CHECK(fwsp_lyapunov(inst, bad, mu, &v) == FWSP_ERR_DOMAIN);
  fwsp_instance_destroy(inst);

  CHECK(fwsp_status_exit_code(FWSP_OK) == 0);
  CHECK(fwsp_status_exit_code(FWSP_ERR_CONFIG) == 1);
  CHECK(fwsp_status_exit_code(FWSP_ERR_NONSMOOTH) == 2);
  CHECK(fwsp_status_exit_code(FWSP_ERR_CHOLESKY) == 2);
  CHECK(std::string(fwsp_status_string(FWSP_ERR_IO)) == "I/O error");
}

TEST_CASE("experiment handle") {
  fwsp_experiment* exp = nullptr;
  CHECK(fwsp_experiment_create("{\"iters\": ", &exp) == FWSP_ERR_CONFIG);
  CHECK(exp == nullptr);
  REQUIRE(fwsp_experiment_create(nullptr, &exp) == FWSP_OK);
  CHECK(fwsp_experiment_set_mode(exp, FWSP_MODE_CHECK) == FWSP_OK);
  CHECK(fwsp_experiment_set_seed(exp, 4) == FWSP_OK);
  CHECK(fwsp_experiment_set_paper_scale(exp, 0) == FWSP_OK);
  CHECK(fwsp_experiment_run(exp) == FWSP_OK);
  CHECK(std::string(fwsp_experiment_report(exp)).find("PASS") !=
        std::string::npos);
  fwsp_experiment_destroy(exp);
  fwsp_experiment_destroy(nullptr);
  fwsp_instance_destroy(nullptr);
}

}  // TEST_SUITE

}  // namespace
