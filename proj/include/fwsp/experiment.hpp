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

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fwsp/dynamics.hpp"
#include "fwsp/model.hpp"

namespace fwsp {

enum class Mode { kRun, kFlow, kLearn, kSolve, kCheck };

std::optional<Mode> parse_mode(std::string_view name);
std::string_view mode_name(Mode mode);

inline constexpr std::int64_t kDefaultIterations = 1'000'000;
inline constexpr std::int64_t kPaperIterations = 10'000'000;

struct ExperimentConfig {
  std::string instance_name = "case1";
  std::optional<BanditInstance> instance;  // empty until resolved
  Mode mode = Mode::kRun;
  std::int64_t iters = kDefaultIterations;  // run and learn
  double horizon = 10.0;                    // flow
  double step_h = 1e-3;                     // flow
  double resolution = 1e-2;                 // solve
  int replications = 1;
  std::uint64_t base_seed = 0;
  RecordSchedule record = RecordSchedule::geometric();
  std::string out = ".";
  bool paper_scale = false;

  std::int64_t effective_iters() const {
    return paper_scale ? kPaperIterations : iters;
  }
  const BanditInstance& resolved_instance() const;
};

// Parses the JSON experiment config. Syntax errors report line:column, field
// errors name the field; both throw Errc::kConfig. Instance validation errors
// keep their own codes. A builtin instance name is resolved immediately.
ExperimentConfig parse_config(std::string_view json_text);

// {"kind", "family", "theta", "features", "variances"}; variances default
// to ones.
BanditInstance parse_instance_json(std::string_view json_text);

struct SummaryRow {
  double step = 0.0;
  double V_mean = 0.0;
  double V_q1 = 0.0;
  double V_median = 0.0;
  double V_q3 = 0.0;
  double F_mean = 0.0;
  double F_q1 = 0.0;
  double F_q3 = 0.0;
  int V_count = 0;  // replications with a defined V at this step
};

// Linear-interpolation percentile, q in [0, 1].
double percentile(std::vector<double> values, double q);

// Per-step mean and quartiles across replications. Throws
// kMisalignedSchedules unless every replication records the same steps.
std::vector<SummaryRow> summarize_replications(
    const std::vector<std::vector<TrajectoryRecord>>& replications);

void write_trajectories_csv(
    std::ostream& os,
    const std::vector<std::vector<TrajectoryRecord>>& replications,
    int num_arms, bool learning_columns);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

struct ExperimentResult {
  std::vector<std::vector<TrajectoryRecord>> replications;
  std::vector<SummaryRow> summary;
  std::vector<std::string> files;
  std::string report;
  bool passed = true;  // false only when a check fails
};

// Runs the configured mode, writes CSVs under config.out and returns the
// human-readable report.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace fwsp
