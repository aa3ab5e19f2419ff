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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fwsp/experiment.hpp"
#include "support.hpp"

namespace fwsp {
namespace {

using doctest::Approx;
using testing::error_code;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("fwsp_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir;
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TrajectoryRecord rec(double step, double v, double f) {
  TrajectoryRecord r;
  r.step = step;
  r.V = v;
  r.F = f;
  return r;
}

TEST_SUITE("experiment") {

TEST_CASE("config defaults and builtin resolution") {
  const ExperimentConfig c = parse_config(R"({"instance": "case2"})");
  CHECK(c.instance_name == "case2");
  REQUIRE(c.instance);
  CHECK(c.instance->num_arms() == 6);
  CHECK(c.mode == Mode::kRun);
  CHECK(c.effective_iters() == kDefaultIterations);
  CHECK(c.replications == 1);

  ExperimentConfig scaled = c;
  scaled.paper_scale = true;
  CHECK(scaled.effective_iters() == kPaperIterations);
}

TEST_CASE("full config") {
  const ExperimentConfig c = parse_config(R"({
    "instance": {"kind": "unstructured", "family": "bernoulli",
                 "theta": [0.2, 0.5, 0.4]},
    "mode": "learn", "iters": 50, "horizon": 2.5, "step_h": 0.01,
    "resolution": 0.05, "replications": 3, "base_seed": 9,
    "record": [1, 10, 50], "out": "somewhere"})");
  CHECK(c.instance_name == "custom");
  CHECK(c.instance->family() == Family::kBernoulli);
  CHECK(c.mode == Mode::kLearn);
  CHECK(c.iters == 50);
  CHECK(c.horizon == 2.5);
  CHECK(c.step_h == 0.01);
  CHECK(c.resolution == 0.05);
  CHECK(c.replications == 3);
  CHECK(c.base_seed == 9);
  CHECK_FALSE(c.record.is_geometric());
  CHECK(c.record.steps() == std::vector<std::int64_t>{1, 10, 50});
  CHECK(c.out == "somewhere");

  const ExperimentConfig lin = parse_config(R"({"instance": {"kind": "linear",
    "theta": [1, 0], "features": [[1, 0], [0, 1], [-2, 0]],
    "variances": [1, 2, 1]}})");
  CHECK(lin.instance->is_linear());
  CHECK(lin.instance->variances()(1) == 2.0);
}

TEST_CASE("config errors name the line and the field") {
  const std::string syntax = message_of("{\n  \"iters\": 10,\n  oops\n}");
  CHECK(syntax.find("line 3") != std::string::npos);
  CHECK(error_code([] { parse_config("[1, 2]"); }) == Errc::kConfig);
  CHECK(message_of(R"({"iterz": 3})").find("'iterz'") != std::string::npos);
  CHECK(message_of(R"({"iters": -3})").find("'iters'") != std::string::npos);
  CHECK(message_of(R"({"replications": 0})").find("'replications'") !=
        std::string::npos);
  CHECK(message_of(R"({"mode": "fly"})").find("'mode'") != std::string::npos);
  CHECK(message_of(R"({"instance": "case9"})").find("case9") !=
        std::string::npos);
  CHECK(message_of(R"({"record": "linear"})").find("'record'") !=
        std::string::npos);
  CHECK(message_of(R"({"instance": {"kind": "linear", "theta": [1]}})")
            .find("'instance.features'") != std::string::npos);
  CHECK(message_of(R"({"instance": {"kind": "tree", "theta": [1, 0]}})")
            .find("'instance.kind'") != std::string::npos);
  // Instance validation keeps its own code.
  CHECK(error_code([] {
          parse_config(R"({"instance": {"kind": "unstructured",
                                        "theta": [1, 1]}})");
        }) == Errc::kNonUniqueBestArm);
  CHECK(error_code([] {
          parse_instance_json(R"({"kind": "linear", "theta": [1, 0],
                                  "features": [[1, 0], [0]]})");
        }) == Errc::kDimensionMismatch);
}

TEST_CASE("percentiles interpolate linearly") {
  CHECK(percentile({1, 2, 3, 4}, 0.25) == Approx(1.75));
  CHECK(percentile({4, 3, 2, 1}, 0.75) == Approx(3.25));
  CHECK(percentile({7}, 0.25) == 7.0);
  CHECK(percentile({1, 3}, 0.5) == 2.0);
}

TEST_CASE("summaries across replications") {
  const auto one = summarize_replications({{rec(1, 0.5, 0.2)}});
  REQUIRE(one.size() == 1);
  CHECK(one[0].V_mean == 0.5);
  CHECK(one[0].V_q1 == 0.5);
  CHECK(one[0].V_q3 == 0.5);

  std::vector<std::vector<TrajectoryRecord>> four;
  for (int v = 1; v <= 4; ++v) four.push_back({rec(8, v, 1.0)});
  const auto s = summarize_replications(four);
  CHECK(s[0].V_mean == Approx(2.5));
  CHECK(s[0].V_q1 == Approx(1.75));
  CHECK(s[0].V_q3 == Approx(3.25));
  CHECK(s[0].F_mean == Approx(1.0));

  CHECK(error_code([] {
          summarize_replications({{rec(1, 0, 0)}, {rec(2, 0, 0)}});
        }) == Errc::kMisalignedSchedules);
  CHECK(error_code([] {
          summarize_replications({{rec(1, 0, 0)}, {}});
        }) == Errc::kMisalignedSchedules);
  CHECK(error_code([] { summarize_replications({}); }) ==
        Errc::kMisalignedSchedules);

  TrajectoryRecord missing = rec(1, 0, 0.5);
  missing.V.reset();
  const auto partial = summarize_replications({{missing}, {rec(1, 2.0, 0.5)}});
  CHECK(partial[0].V_count == 1);
  CHECK(partial[0].V_mean == 2.0);
}

TEST_CASE("property: quartiles bracket the median") {
  testing::Rng rng(50);
  std::lognormal_distribution<double> heavy(0.0, 2.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::vector<TrajectoryRecord>> reps;
    for (int r = 0; r < 25; ++r) reps.push_back({rec(1, heavy(rng), 0.0)});
    const SummaryRow row = summarize_replications(reps)[0];
    CHECK(row.V_q1 <= row.V_median);
    CHECK(row.V_median <= row.V_q3);
  }
}

TEST_CASE("csv layout") {
  TrajectoryRecord r = rec(4, 0.125, 1.0 / 3);
  r.gap_lb = 0.0;
  r.p = testing::vec({0.5, 0.25, 0.25});
  r.mu = testing::vec({1.0, 0.0});
  r.pulled_arm = 0;
  r.chosen_scenario = 2;
  std::ostringstream os;
  write_trajectories_csv(os, {{r}}, 3, false);
  CHECK(os.str() ==
        "rep,step,F,V,gap_lb,p_1,p_2,p_3,mu_1,mu_2,pulled_arm,"
        "chosen_scenario\n"
        "0,4,0.333333333333,0.125,0,0.5,0.25,0.25,1,0,1,3\n");

  r.V.reset();
  r.pulled_arm = -1;
  r.used_fallback = true;
  r.posterior_rank = 2;
  std::ostringstream learn;
  write_trajectories_csv(learn, {{r}}, 3, true);
  CHECK(learn.str().find(",used_fallback,posterior_rank\n") !=
        std::string::npos);
  CHECK(learn.str().find("0,4,0.333333333333,NA,0,") != std::string::npos);
  CHECK(learn.str().find(",NA,3,1,2\n") != std::string::npos);

  std::ostringstream sum;
  write_summary_csv(sum, summarize_replications({{rec(2, 0.5, 0.25)}}));
  CHECK(sum.str() == "step,V_mean,V_q1,V_q3,F_mean\n2,0.5,0.5,0.5,0.25\n");
}

TEST_CASE("run mode smoke test") {
  const auto dir = scratch_dir("run");
  ExperimentConfig c = parse_config(R"({"instance": "case1", "iters": 10000})");
  c.out = dir.string();
  const ExperimentResult r = run_experiment(c);
  REQUIRE(r.files.size() == 2);
  CHECK(std::abs(r.replications[0].back().F - 2.0 / 9) <= 0.03);
  const std::string traj = read_file(dir / "trajectories.csv");
  CHECK(traj.rfind("rep,step,F,V,gap_lb,p_1,p_2,p_3,mu_1,mu_2,", 0) == 0);
  CHECK(traj.find("\n0,10000,") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("solve mode prints the value") {
  const auto dir = scratch_dir("solve");
  ExperimentConfig c = parse_config(R"({"instance": "case1", "mode": "solve"})");
  c.out = dir.string();
  const ExperimentResult r = run_experiment(c);
  const auto pos = r.report.find("F* = ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::abs(std::stod(r.report.substr(pos + 5)) - 0.222) <= 0.01);
  CHECK(std::filesystem::exists(dir / "solve.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("flow and learn modes with replications") {
  const auto dir = scratch_dir("modes");
  ExperimentConfig flow = parse_config(
      R"({"instance": "case1", "mode": "flow", "horizon": 2,
          "replications": 2})");
  flow.out = (dir / "flow").string();
  const ExperimentResult f = run_experiment(flow);
  CHECK(f.replications.size() == 2);
  CHECK(f.summary.size() == 3);
  CHECK(f.summary[0].V_q1 == f.summary[0].V_q3);

  ExperimentConfig learn = parse_config(
      R"({"instance": "case1", "mode": "learn", "iters": 200,
          "replications": 3, "record": [100, 200]})");
  learn.out = (dir / "learn").string();
  const ExperimentResult l = run_experiment(learn);
  CHECK(l.replications.size() == 3);
  CHECK(l.summary.size() == 5);  // three warm-up records plus two
  const std::string traj = read_file(dir / "learn" / "trajectories.csv");
  CHECK(traj.find("used_fallback,posterior_rank") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("outputs are byte-identical for identical seeds") {
  const auto dir = scratch_dir("det");
  const std::string cfg = R"({"instance": "case1", "mode": "learn",
      "iters": 500, "replications": 4, "base_seed": 11})";
  ExperimentConfig a = parse_config(cfg);
  a.out = (dir / "a").string();
  ExperimentConfig b = a;
  b.out = (dir / "b").string();
  setenv("FWSP_THREADS", "1", 1);
  run_experiment(a);
  setenv("FWSP_THREADS", "4", 1);
  run_experiment(b);
  unsetenv("FWSP_THREADS");
  for (const char* f : {"trajectories.csv", "summary.csv"}) {
    CHECK(read_file(dir / "a" / f) == read_file(dir / "b" / f));
  }
  ExperimentConfig c = a;
  c.base_seed = 12;
  c.out = (dir / "c").string();
  run_experiment(c);
  CHECK(read_file(dir / "a" / "trajectories.csv") !=
        read_file(dir / "c" / "trajectories.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("check mode passes") {
  ExperimentConfig c;
  c.mode = Mode::kCheck;
  const ExperimentResult r = run_experiment(c);
  CHECK(r.passed);
  CHECK(r.report.find("FAIL") == std::string::npos);
}

TEST_CASE("mode names round-trip") {
  for (Mode m : {Mode::kRun, Mode::kFlow, Mode::kLearn, Mode::kSolve,
                 Mode::kCheck}) {
    CHECK(parse_mode(mode_name(m)) == m);
  }
  CHECK_FALSE(parse_mode("walk").has_value());
}

}  // TEST_SUITE

}  // namespace
}  // namespace fwsp
