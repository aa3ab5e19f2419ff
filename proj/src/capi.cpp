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

#include "fwsp/fwsp.h"

#include <exception>
#include <new>
#include <string>

#include "fwsp/builtins.hpp"
#include "fwsp/dynamics.hpp"
#include "fwsp/error.hpp"
#include "fwsp/experiment.hpp"
#include "fwsp/oracles.hpp"

struct fwsp_instance {
  fwsp::BanditInstance inst;
};

struct fwsp_experiment {
  fwsp::ExperimentConfig config;
  std::string report;
};

namespace {

thread_local std::string g_last_error;

fwsp_status from_errc(fwsp::Errc code) {
  using fwsp::Errc;
  switch (code) {
    case Errc::kNonUniqueBestArm: return FWSP_ERR_NON_UNIQUE_BEST_ARM;
    case Errc::kDomainViolation: return FWSP_ERR_DOMAIN;
    case Errc::kDimensionMismatch: return FWSP_ERR_DIMENSION;
    case Errc::kNonsmoothPoint: return FWSP_ERR_NONSMOOTH;
    case Errc::kScenarioOutOfSpan: return FWSP_ERR_OUT_OF_SPAN;
    case Errc::kCholeskyFailure: return FWSP_ERR_CHOLESKY;
    case Errc::kTooManyGridPoints: return FWSP_ERR_TOO_MANY_GRID_POINTS;
    case Errc::kMisalignedSchedules: return FWSP_ERR_MISALIGNED_SCHEDULES;
    case Errc::kConfig: return FWSP_ERR_CONFIG;
    case Errc::kIo: return FWSP_ERR_IO;
  }
  return FWSP_ERR_INTERNAL;
}

fwsp_status fail(fwsp_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, mapping exceptions onto status codes.
template <class Fn>
fwsp_status guard(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const fwsp::Error& e) {
    return fail(from_errc(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FWSP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FWSP_ERR_INTERNAL, e.what());
  }
}

#define FWSP_REQUIRE(cond, what) \
  if (!(cond)) return fail(FWSP_ERR_INVALID_ARGUMENT, what)

Eigen::Map<const fwsp::Vector> view(const double* data, int n) {
  return Eigen::Map<const fwsp::Vector>(data, n);
}

fwsp_status find_scenario(const fwsp::BanditInstance& inst, int arm,
                          fwsp::Scenario* out) {
  for (const fwsp::Scenario& x : inst.scenarios()) {
    if (x.arm == arm) {
      *out = x;
      return FWSP_OK;
    }
  }
  return fail(FWSP_ERR_INVALID_ARGUMENT,
              "arm " + std::to_string(arm) + " is not a scenario");
}

}  // namespace

extern "C" {

const char* fwsp_status_string(fwsp_status status) {
  switch (status) {
    case FWSP_OK: return "ok";
    case FWSP_ERR_NON_UNIQUE_BEST_ARM: return "non-unique best arm";
    case FWSP_ERR_DOMAIN: return "domain violation";
    case FWSP_ERR_DIMENSION: return "dimension mismatch";
    case FWSP_ERR_NONSMOOTH: return "nonsmooth point";
    case FWSP_ERR_OUT_OF_SPAN: return "scenario out of span";
    case FWSP_ERR_CHOLESKY: return "Cholesky failure";
    case FWSP_ERR_TOO_MANY_GRID_POINTS: return "too many grid points";
    case FWSP_ERR_MISALIGNED_SCHEDULES: return "misaligned schedules";
    case FWSP_ERR_CONFIG: return "configuration error";
    case FWSP_ERR_IO: return "I/O error";
    case FWSP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FWSP_ERR_INTERNAL: return "internal error";
    case FWSP_CHECK_FAILED: return "self-check failed";
  }
  return "unknown status";
}

const char* fwsp_last_error_message(void) { return g_last_error.c_str(); }

int fwsp_status_exit_code(fwsp_status status) {
  switch (status) {
    case FWSP_OK:
      return 0;
    case FWSP_ERR_NON_UNIQUE_BEST_ARM:
    case FWSP_ERR_DOMAIN:
    case FWSP_ERR_DIMENSION:
    case FWSP_ERR_CONFIG:
    case FWSP_ERR_IO:
    case FWSP_ERR_INVALID_ARGUMENT:
    case FWSP_ERR_TOO_MANY_GRID_POINTS:
      return 1;
    default:
      return 2;
  }
}

fwsp_status fwsp_instance_create_builtin(const char* name,
                                         fwsp_instance** out) {
  FWSP_REQUIRE(name && out, "null argument");
  *out = nullptr;
  return guard([&] {
    *out = new fwsp_instance{fwsp::builtin(name).instance};
    return FWSP_OK;
  });
}

fwsp_status fwsp_instance_create_json(const char* json, fwsp_instance** out) {
  FWSP_REQUIRE(json && out, "null argument");
  *out = nullptr;
  return guard([&] {
    *out = new fwsp_instance{fwsp::parse_instance_json(json)};
    return FWSP_OK;
  });
}

void fwsp_instance_destroy(fwsp_instance* inst) { delete inst; }

int fwsp_instance_num_arms(const fwsp_instance* inst) {
  return inst ? inst->inst.num_arms() : -1;
}

int fwsp_instance_dim(const fwsp_instance* inst) {
  return inst ? inst->inst.dim() : -1;
}

int fwsp_instance_best_arm(const fwsp_instance* inst) {
  return inst ? inst->inst.best_arm() : -1;
}

fwsp_status fwsp_instance_means(const fwsp_instance* inst, double* out,
                                size_t len) {
  FWSP_REQUIRE(inst && out, "null argument");
  const auto& m = inst->inst.means();
  FWSP_REQUIRE(len >= static_cast<size_t>(m.size()), "buffer too small");
  for (Eigen::Index i = 0; i < m.size(); ++i) out[i] = m(i);
  return FWSP_OK;
}

fwsp_status fwsp_instance_scenarios(const fwsp_instance* inst, int* out,
                                    size_t len) {
  FWSP_REQUIRE(inst && out, "null argument");
  const auto& xs = inst->inst.scenarios();
  FWSP_REQUIRE(len >= xs.size(), "buffer too small");
  for (size_t i = 0; i < xs.size(); ++i) out[i] = xs[i].arm;
  return FWSP_OK;
}

fwsp_status fwsp_d_value(const fwsp_instance* inst, const double* p,
                         int scenario_arm, double* out) {
  FWSP_REQUIRE(inst && p && out, "null argument");
  fwsp::Scenario x;
  if (auto s = find_scenario(inst->inst, scenario_arm, &x); s != FWSP_OK) {
    return s;
  }
  return guard([&] {
    *out = fwsp::d_value(inst->inst, view(p, inst->inst.num_arms()), x);
    return FWSP_OK;
  });
}

fwsp_status fwsp_d_grad(const fwsp_instance* inst, const double* p,
                        int scenario_arm, double* grad_out) {
  FWSP_REQUIRE(inst && p && grad_out, "null argument");
  fwsp::Scenario x;
  if (auto s = find_scenario(inst->inst, scenario_arm, &x); s != FWSP_OK) {
    return s;
  }
  return guard([&] {
    const int k = inst->inst.num_arms();
    const fwsp::Vector g = fwsp::d_grad(inst->inst, view(p, k), x);
    for (int i = 0; i < k; ++i) grad_out[i] = g(i);
    return FWSP_OK;
  });
}

fwsp_status fwsp_payoff(const fwsp_instance* inst, const double* p,
                        const double* mu, double* out) {
  FWSP_REQUIRE(inst && p && mu && out, "null argument");
  return guard([&] {
    const int k = inst->inst.num_arms();
    *out = fwsp::payoff_F(inst->inst, view(p, k), view(mu, k - 1));
    return FWSP_OK;
  });
}

fwsp_status fwsp_lyapunov(const fwsp_instance* inst, const double* p,
                          const double* mu, double* out) {
  FWSP_REQUIRE(inst && p && mu && out, "null argument");
  return guard([&] {
    const int k = inst->inst.num_arms();
    *out = fwsp::lyapunov_V(inst->inst, view(p, k), view(mu, k - 1));
    return FWSP_OK;
  });
}

fwsp_status fwsp_kkt_residuals(const fwsp_instance* inst, const double* p,
                               const double* mu, double* experimenter,
                               double* skeptic) {
  FWSP_REQUIRE(inst && p && mu && experimenter && skeptic, "null argument");
  return guard([&] {
    const int k = inst->inst.num_arms();
    const fwsp::KktResiduals r =
        fwsp::kkt_residuals(inst->inst, view(p, k), view(mu, k - 1));
    *experimenter = r.experimenter;
    *skeptic = r.skeptic;
    return FWSP_OK;
  });
}

fwsp_status fwsp_grid_solve(const fwsp_instance* inst, double resolution,
                            double* value_out, double* p_out) {
  FWSP_REQUIRE(inst && value_out && p_out, "null argument");
  FWSP_REQUIRE(resolution > 0.0 && resolution <= 1.0,
               "resolution must lie in (0, 1]");
  return guard([&] {
    const fwsp::GridSolution g = fwsp::grid_saddle_solve(inst->inst, resolution);
    *value_out = g.value;
    for (Eigen::Index i = 0; i < g.p.size(); ++i) p_out[i] = g.p(i);
    return FWSP_OK;
  });
}

fwsp_status fwsp_experiment_create(const char* config_json,
                                   fwsp_experiment** out) {
  FWSP_REQUIRE(out, "null argument");
  *out = nullptr;
  return guard([&] {
    auto* exp = new fwsp_experiment;
    try {
      if (config_json) {
        exp->config = fwsp::parse_config(config_json);
      } else {
        exp->config.instance = fwsp::builtin(exp->config.instance_name).instance;
      }
    } catch (...) {
      delete exp;
      throw;
    }
    *out = exp;
    return FWSP_OK;
  });
}

void fwsp_experiment_destroy(fwsp_experiment* exp) { delete exp; }

fwsp_status fwsp_experiment_set_mode(fwsp_experiment* exp, fwsp_mode mode) {
  FWSP_REQUIRE(exp, "null argument");
  FWSP_REQUIRE(mode >= FWSP_MODE_RUN && mode <= FWSP_MODE_CHECK,
               "unknown mode");
  exp->config.mode = static_cast<fwsp::Mode>(mode);
  return FWSP_OK;
}

fwsp_status fwsp_experiment_set_seed(fwsp_experiment* exp, uint64_t seed) {
  FWSP_REQUIRE(exp, "null argument");
  exp->config.base_seed = seed;
  return FWSP_OK;
}

fwsp_status fwsp_experiment_set_output_dir(fwsp_experiment* exp,
                                           const char* dir) {
  FWSP_REQUIRE(exp && dir, "null argument");
  exp->config.out = dir;
  return FWSP_OK;
}

fwsp_status fwsp_experiment_set_paper_scale(fwsp_experiment* exp,
                                            int enabled) {
  FWSP_REQUIRE(exp, "null argument");
  exp->config.paper_scale = enabled != 0;
  return FWSP_OK;
}

fwsp_status fwsp_experiment_run(fwsp_experiment* exp) {
  FWSP_REQUIRE(exp, "null argument");
  exp->report.clear();
  return guard([&] {
    const fwsp::ExperimentResult r = fwsp::run_experiment(exp->config);
    exp->report = r.report;
    if (!r.passed) return fail(FWSP_CHECK_FAILED, "self-check failed");
    return FWSP_OK;
  });
}

const char* fwsp_experiment_report(const fwsp_experiment* exp) {
  return exp ? exp->report.c_str() : "";
}

}  // extern "C"
