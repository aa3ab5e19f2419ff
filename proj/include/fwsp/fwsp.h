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

/* C interface to the FWSP library. All handles are opaque; every call
 * returns an fwsp_status and leaves a message for the calling thread in
 * fwsp_last_error_message() on failure. Arm indices are 0-based. */
#ifndef FWSP_FWSP_H_
#define FWSP_FWSP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(FWSP_BUILDING_LIBRARY)
#define FWSP_API __declspec(dllexport)
#else
#define FWSP_API __declspec(dllimport)
#endif
#else
#define FWSP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fwsp_status {
  FWSP_OK = 0,
  FWSP_ERR_NON_UNIQUE_BEST_ARM = 1,
  FWSP_ERR_DOMAIN = 2,
  FWSP_ERR_DIMENSION = 3,
  FWSP_ERR_NONSMOOTH = 4,
  FWSP_ERR_OUT_OF_SPAN = 5,
  FWSP_ERR_CHOLESKY = 6,
  FWSP_ERR_TOO_MANY_GRID_POINTS = 7,
  FWSP_ERR_MISALIGNED_SCHEDULES = 8,
  FWSP_ERR_CONFIG = 9,
  FWSP_ERR_IO = 10,
  FWSP_ERR_INVALID_ARGUMENT = 11,
  FWSP_ERR_INTERNAL = 12,
  FWSP_CHECK_FAILED = 13
} fwsp_status;

typedef struct fwsp_instance fwsp_instance;
typedef struct fwsp_experiment fwsp_experiment;

typedef enum fwsp_mode {
  FWSP_MODE_RUN = 0,
  FWSP_MODE_FLOW = 1,
  FWSP_MODE_LEARN = 2,
  FWSP_MODE_SOLVE = 3,
  FWSP_MODE_CHECK = 4
} fwsp_mode;

FWSP_API const char* fwsp_status_string(fwsp_status status);
/* Message of the last failing call on this thread; "" if none. */
FWSP_API const char* fwsp_last_error_message(void);
/* 0 success, 1 configuration/input error, 2 numeric failure. */
FWSP_API int fwsp_status_exit_code(fwsp_status status);

/* Instances. */
FWSP_API fwsp_status fwsp_instance_create_builtin(const char* name,
                                                  fwsp_instance** out);
FWSP_API fwsp_status fwsp_instance_create_json(const char* json,
                                               fwsp_instance** out);
FWSP_API void fwsp_instance_destroy(fwsp_instance* inst);

FWSP_API int fwsp_instance_num_arms(const fwsp_instance* inst);
FWSP_API int fwsp_instance_dim(const fwsp_instance* inst);
FWSP_API int fwsp_instance_best_arm(const fwsp_instance* inst);
/* Writes num_arms means. */
FWSP_API fwsp_status fwsp_instance_means(const fwsp_instance* inst,
                                         double* out, size_t len);
/* Writes the num_arms - 1 scenario arms in ascending order. */
FWSP_API fwsp_status fwsp_instance_scenarios(const fwsp_instance* inst,
                                             int* out, size_t len);

/* Divergences and payoff. p has num_arms entries, mu num_arms - 1;
 * scenario_arm names an arm other than the best one. */
FWSP_API fwsp_status fwsp_d_value(const fwsp_instance* inst, const double* p,
                                  int scenario_arm, double* out);
FWSP_API fwsp_status fwsp_d_grad(const fwsp_instance* inst, const double* p,
                                 int scenario_arm, double* grad_out);
FWSP_API fwsp_status fwsp_payoff(const fwsp_instance* inst, const double* p,
                                 const double* mu, double* out);
FWSP_API fwsp_status fwsp_lyapunov(const fwsp_instance* inst, const double* p,
                                   const double* mu, double* out);
FWSP_API fwsp_status fwsp_kkt_residuals(const fwsp_instance* inst,
                                        const double* p, const double* mu,
                                        double* experimenter,
                                        double* skeptic);
/* p_out receives num_arms entries. */
FWSP_API fwsp_status fwsp_grid_solve(const fwsp_instance* inst,
                                     double resolution, double* value_out,
                                     double* p_out);

/* Experiments. config_json may be NULL for the defaults. */
FWSP_API fwsp_status fwsp_experiment_create(const char* config_json,
                                            fwsp_experiment** out);
FWSP_API void fwsp_experiment_destroy(fwsp_experiment* exp);
FWSP_API fwsp_status fwsp_experiment_set_mode(fwsp_experiment* exp,
                                              fwsp_mode mode);
FWSP_API fwsp_status fwsp_experiment_set_seed(fwsp_experiment* exp,
                                              uint64_t seed);
FWSP_API fwsp_status fwsp_experiment_set_output_dir(fwsp_experiment* exp,
                                                    const char* dir);
FWSP_API fwsp_status fwsp_experiment_set_paper_scale(fwsp_experiment* exp,
                                                     int enabled);
/* FWSP_CHECK_FAILED when a check-mode invariant fails. */
FWSP_API fwsp_status fwsp_experiment_run(fwsp_experiment* exp);
/* Report of the last run; valid until the next run or destroy. */
FWSP_API const char* fwsp_experiment_report(const fwsp_experiment* exp);

#ifdef __cplusplus
}
#endif

#endif  /* FWSP_FWSP_H_ */
