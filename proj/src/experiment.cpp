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

#include "fwsp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "fwsp/builtins.hpp"
#include "fwsp/error.hpp"
#include "fwsp/learning.hpp"
#include "fwsp/oracles.hpp"
#include "fwsp/self_check.hpp"
#include "json.hpp"

namespace fwsp {

using nlohmann::json;

std::optional<Mode> parse_mode(std::string_view name) {
  if (name == "run") return Mode::kRun;
  if (name == "flow") return Mode::kFlow;
  if (name == "learn") return Mode::kLearn;
  if (name == "solve") return Mode::kSolve;
  if (name == "check") return Mode::kCheck;
  return std::nullopt;
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kRun: return "run";
    case Mode::kFlow: return "flow";
    case Mode::kLearn: return "learn";
    case Mode::kSolve: return "solve";
    case Mode::kCheck: return "check";
  }
  return "unknown";
}

const BanditInstance& ExperimentConfig::resolved_instance() const {
  if (!instance) {
    throw Error(Errc::kConfig,
                "instance '" + instance_name + "' is unresolved");
  }
  return *instance;
}

namespace {

[[noreturn]] void field_error(const std::string& field,
                              const std::string& what) {
  throw Error(Errc::kConfig, "field '" + field + "': " + what);
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line:column.
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte, text.size() + 1);
    for (std::size_t i = 0; i + 1 < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(Errc::kConfig, "line " + std::to_string(line) + ", column " +
                                   std::to_string(column) +
                                   ": malformed JSON");
  }
}

Vector number_array(const json& node, const std::string& field) {
  if (!node.is_array() || node.empty()) {
    field_error(field, "expected a non-empty array of numbers");
  }
  Vector v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number()) {
      field_error(field + "[" + std::to_string(i) + "]", "expected a number");
    }
    v(static_cast<Eigen::Index>(i)) = node[i].get<double>();
  }
  return v;
}

Matrix number_matrix(const json& node, const std::string& field) {
  if (!node.is_array() || node.empty()) {
    field_error(field, "expected a non-empty array of rows");
  }
  const std::size_t rows = node.size();
  std::size_t cols = 0;
  Matrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const Vector row =
        number_array(node[r], field + "[" + std::to_string(r) + "]");
    if (r == 0) {
      cols = static_cast<std::size_t>(row.size());
      m.resize(static_cast<Eigen::Index>(rows),
               static_cast<Eigen::Index>(cols));
    } else if (static_cast<std::size_t>(row.size()) != cols) {
      throw Error(Errc::kDimensionMismatch,
                  "field '" + field + "': rows have different lengths");
    }
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

std::string string_field(const json& node, const std::string& field) {
  if (!node.is_string()) field_error(field, "expected a string");
  return node.get<std::string>();
}

BanditInstance instance_from_node(const json& node, const std::string& prefix) {
  if (!node.is_object()) field_error(prefix, "expected an object");
  static const char* const kKnown[] = {"kind", "family", "theta", "features",
                                       "variances"};
  for (auto it = node.begin(); it != node.end(); ++it) {
    if (std::find(std::begin(kKnown), std::end(kKnown), it.key()) ==
        std::end(kKnown)) {
      field_error(prefix + it.key(), "unknown field");
    }
  }
  if (!node.contains("kind")) field_error(prefix + "kind", "missing");
  if (!node.contains("theta")) field_error(prefix + "theta", "missing");
  const std::string kind = string_field(node["kind"], prefix + "kind");
  const Vector theta = number_array(node["theta"], prefix + "theta");
  const Vector variances = node.contains("variances")
                               ? number_array(node["variances"],
                                              prefix + "variances")
                               : Vector{};

  Family family = Family::kGaussian;
  if (node.contains("family")) {
    const std::string name = string_field(node["family"], prefix + "family");
    if (name == "gaussian") {
      family = Family::kGaussian;
    } else if (name == "bernoulli") {
      family = Family::kBernoulli;
    } else if (name == "poisson") {
      family = Family::kPoisson;
    } else {
      field_error(prefix + "family",
                  "expected gaussian, bernoulli or poisson, got '" + name +
                      "'");
    }
  }

  if (kind == "linear") {
    if (family != Family::kGaussian) {
      field_error(prefix + "family", "linear instances are always gaussian");
    }
    if (!node.contains("features")) {
      field_error(prefix + "features", "missing for a linear instance");
    }
    return BanditInstance::linear(
        number_matrix(node["features"], prefix + "features"), theta,
        variances);
  }
  if (kind == "unstructured") {
    if (node.contains("features")) {
      field_error(prefix + "features",
                  "not allowed for an unstructured instance");
    }
    return BanditInstance::unstructured(family, theta, variances);
  }
  field_error(prefix + "kind",
              "expected linear or unstructured, got '" + kind + "'");
}

std::int64_t positive_integer(const json& node, const std::string& field) {
  if (!node.is_number_integer() || node.get<std::int64_t>() < 1) {
    field_error(field, "expected an integer >= 1");
  }
  return node.get<std::int64_t>();
}

double positive_number(const json& node, const std::string& field) {
  if (!node.is_number() || !(node.get<double>() > 0.0)) {
    field_error(field, "expected a positive number");
  }
  return node.get<double>();
}

}  // namespace

BanditInstance parse_instance_json(std::string_view json_text) {
  return instance_from_node(parse_json_text(json_text), "");
}

ExperimentConfig parse_config(std::string_view json_text) {
  const json root = parse_json_text(json_text);
  if (!root.is_object()) {
    throw Error(Errc::kConfig, "config must be a JSON object");
  }
  ExperimentConfig config;
  for (auto it = root.begin(); it != root.end(); ++it) {
    const std::string& key = it.key();
    const json& value = it.value();
    if (key == "instance") {
      if (value.is_string()) {
        config.instance_name = value.get<std::string>();
        if (!is_builtin(config.instance_name)) {
          field_error("instance", "unknown builtin '" + config.instance_name +
                                      "'");
        }
      } else {
        config.instance_name = "custom";
        config.instance = instance_from_node(value, "instance.");
      }
    } else if (key == "mode") {
      const auto mode = parse_mode(string_field(value, "mode"));
      if (!mode) field_error("mode", "expected run, flow, learn, solve or check");
      config.mode = *mode;
    } else if (key == "iters") {
      config.iters = positive_integer(value, "iters");
    } else if (key == "horizon") {
      if (!value.is_number() || !(value.get<double>() >= 0.0)) {
        field_error("horizon", "expected a nonnegative number");
      }
      config.horizon = value.get<double>();
    } else if (key == "step_h") {
      config.step_h = positive_number(value, "step_h");
      if (config.step_h >= 1.0) field_error("step_h", "must be below 1");
    } else if (key == "resolution") {
      config.resolution = positive_number(value, "resolution");
      if (config.resolution > 1.0) field_error("resolution", "must be <= 1");
    } else if (key == "replications") {
      const auto reps = positive_integer(value, "replications");
      if (reps > std::numeric_limits<int>::max()) {
        field_error("replications", "too large");
      }
      config.replications = static_cast<int>(reps);
    } else if (key == "base_seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() &&
                                           value.get<std::int64_t>() >= 0)) {
        field_error("base_seed", "expected a nonnegative integer");
      }
      config.base_seed = value.get<std::uint64_t>();
    } else if (key == "record") {
      if (value.is_string()) {
        if (value.get<std::string>() != "geometric") {
          field_error("record", "expected \"geometric\" or a list of steps");
        }
        config.record = RecordSchedule::geometric();
      } else if (value.is_array()) {
        std::vector<std::int64_t> steps;
        for (std::size_t i = 0; i < value.size(); ++i) {
          steps.push_back(
              positive_integer(value[i], "record[" + std::to_string(i) + "]"));
        }
        config.record = RecordSchedule::at(std::move(steps));
      } else {
        field_error("record", "expected \"geometric\" or a list of steps");
      }
    } else if (key == "out") {
      config.out = string_field(value, "out");
    } else {
      field_error(key, "unknown field");
    }
  }
  if (!config.instance) {
    config.instance = builtin(config.instance_name).instance;
  }
  return config;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<SummaryRow> summarize_replications(
    const std::vector<std::vector<TrajectoryRecord>>& replications) {
  if (replications.empty()) {
    throw Error(Errc::kMisalignedSchedules, "no replications to summarize");
  }
  const auto& first = replications.front();
  for (std::size_t r = 1; r < replications.size(); ++r) {
    const auto& rep = replications[r];
    bool aligned = rep.size() == first.size();
    for (std::size_t j = 0; aligned && j < rep.size(); ++j) {
      aligned = rep[j].step == first[j].step;
    }
    if (!aligned) {
      throw Error(Errc::kMisalignedSchedules,
                  "replication " + std::to_string(r) +
                      " records different steps than replication 0");
    }
  }

  std::vector<SummaryRow> rows;
  rows.reserve(first.size());
  std::vector<double> vs;
  std::vector<double> fs;
  for (std::size_t j = 0; j < first.size(); ++j) {
    vs.clear();
    fs.clear();
    for (const auto& rep : replications) {
      fs.push_back(rep[j].F);
      if (rep[j].V) vs.push_back(*rep[j].V);
    }
    SummaryRow row;
    row.step = first[j].step;
    row.V_count = static_cast<int>(vs.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.V_mean = vs.empty() ? nan
                            : std::accumulate(vs.begin(), vs.end(), 0.0) /
                                  static_cast<double>(vs.size());
    row.V_q1 = percentile(vs, 0.25);
    row.V_median = percentile(vs, 0.5);
    row.V_q3 = percentile(vs, 0.75);
    row.F_mean = std::accumulate(fs.begin(), fs.end(), 0.0) /
                 static_cast<double>(fs.size());
    row.F_q1 = percentile(fs, 0.25);
    row.F_q3 = percentile(fs, 0.75);
    rows.push_back(row);
  }
  return rows;
}

namespace {

// %.12g, with NA for missing values. snprintf keeps the C locale.
std::string num(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string label(int index) {
  return index < 0 ? std::string("NA") : std::to_string(index + 1);
}

}  // namespace

void write_trajectories_csv(
    std::ostream& os,
    const std::vector<std::vector<TrajectoryRecord>>& replications,
    int num_arms, bool learning_columns) {
  os << "rep,step,F,V,gap_lb";
  for (int i = 1; i <= num_arms; ++i) os << ",p_" << i;
  for (int j = 1; j < num_arms; ++j) os << ",mu_" << j;
  os << ",pulled_arm,chosen_scenario";
  if (learning_columns) os << ",used_fallback,posterior_rank";
  os << '\n';
  for (std::size_t r = 0; r < replications.size(); ++r) {
    for (const TrajectoryRecord& rec : replications[r]) {
      os << r << ',' << num(rec.step) << ',' << num(rec.F) << ','
         << (rec.V ? num(*rec.V) : "NA") << ',' << num(rec.gap_lb);
      for (Eigen::Index i = 0; i < rec.p.size(); ++i) os << ',' << num(rec.p(i));
      for (Eigen::Index j = 0; j < rec.mu.size(); ++j) {
        os << ',' << num(rec.mu(j));
      }
      os << ',' << label(rec.pulled_arm) << ',' << label(rec.chosen_scenario);
      if (learning_columns) {
        os << ',' << (rec.used_fallback.value_or(false) ? 1 : 0) << ','
           << rec.posterior_rank.value_or(0);
      }
      os << '\n';
    }
  }
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "step,V_mean,V_q1,V_q3,F_mean\n";
  for (const SummaryRow& row : rows) {
    os << num(row.step) << ',' << num(row.V_mean) << ',' << num(row.V_q1)
       << ',' << num(row.V_q3) << ',' << num(row.F_mean) << '\n';
  }
}

namespace {

std::filesystem::path prepare_out_dir(const std::string& out) {
  std::filesystem::path dir(out.empty() ? "." : out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(Errc::kIo, "cannot create output directory '" + dir.string() +
                               "': " + ec.message());
  }
  return dir;
}

template <class Writer>
std::string write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(Errc::kIo, "cannot open '" + path.string() + "'");
  writer(os);
  os.flush();
  if (!os) throw Error(Errc::kIo, "failed writing '" + path.string() + "'");
  return path.string();
}

// Replications run on up to worker_count() threads; results are stored by
// replication index so output order never depends on scheduling.
std::vector<std::vector<TrajectoryRecord>> run_learning_replications(
    const ExperimentConfig& config) {
  const int reps = config.replications;
  std::vector<std::vector<TrajectoryRecord>> out(reps);
  std::vector<std::exception_ptr> errors(reps);
  LearningOptions options;
  options.schedule = config.record;
  std::atomic<int> next{0};
  auto work = [&] {
    for (int r = next++; r < reps; r = next++) {
      try {
        out[r] = run_learning(config.resolved_instance(),
                              config.effective_iters(),
                              config.base_seed + static_cast<std::uint64_t>(r),
                              options)
                     .records;
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const int workers = std::min(worker_count(), reps);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void append_final_state(std::ostringstream& report,
                        const std::vector<SummaryRow>& summary,
                        const TrajectoryRecord& last) {
  const SummaryRow& row = summary.back();
  report << "final step " << num(row.step) << ": F_mean = " << num(row.F_mean)
         << ", V_mean = " << num(row.V_mean) << " (q1 " << num(row.V_q1)
         << ", q3 " << num(row.V_q3) << ")\n";
  report << "last replication p =";
  for (Eigen::Index i = 0; i < last.p.size(); ++i) report << ' ' << num(last.p(i));
  report << "\n";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result;
  std::ostringstream report;
  const std::string mode(mode_name(config.mode));

  if (config.mode == Mode::kCheck) {
    const auto checks = run_self_check();
    for (const CheckResult& c : checks) {
      report << (c.passed ? "PASS " : "FAIL ") << c.name;
      if (!c.detail.empty()) report << " (" << c.detail << ")";
      report << '\n';
      result.passed = result.passed && c.passed;
    }
    result.report = report.str();
    return result;
  }

  const BanditInstance& inst = config.resolved_instance();
  if (config.replications < 1) {
    throw Error(Errc::kConfig, "field 'replications': expected >= 1");
  }
  const auto dir = prepare_out_dir(config.out);

  if (config.mode == Mode::kSolve) {
    const GridSolution sol = grid_saddle_solve(inst, config.resolution);
    report << "instance " << config.instance_name << ", resolution "
           << num(config.resolution) << ", " << sol.points
           << " lattice points\n";
    report << "F* = " << num(sol.value) << "\np* =";
    for (Eigen::Index i = 0; i < sol.p.size(); ++i) report << ' ' << num(sol.p(i));
    report << "\nhardest scenario = arm " << label(sol.min_scenario_arm) << '\n';
    result.files.push_back(write_file(dir / "solve.csv", [&](std::ostream& os) {
      os << "F_star";
      for (Eigen::Index i = 0; i < sol.p.size(); ++i) os << ",p_" << i + 1;
      os << ",min_scenario\n" << num(sol.value);
      for (Eigen::Index i = 0; i < sol.p.size(); ++i) os << ',' << num(sol.p(i));
      os << ',' << label(sol.min_scenario_arm) << '\n';
    }));
    result.report = report.str();
    return result;
  }

  bool learning_columns = false;
  if (config.mode == Mode::kLearn) {
    result.replications = run_learning_replications(config);
    learning_columns = true;
  } else {
    // run and flow are deterministic: every replication is the same path.
    std::vector<TrajectoryRecord> path;
    if (config.mode == Mode::kRun) {
      path = run_fwsp(inst, uniform_state(inst), config.effective_iters(),
                      config.record);
    } else {
      const int k = inst.num_arms();
      path = euler_flow(inst, Vector::Constant(k, 1.0 / k),
                        Vector::Constant(k - 1, 1.0 / (k - 1)), config.step_h,
                        config.horizon);
    }
    result.replications.assign(config.replications, path);
  }
  result.summary = summarize_replications(result.replications);

  result.files.push_back(
      write_file(dir / "trajectories.csv", [&](std::ostream& os) {
        write_trajectories_csv(os, result.replications, inst.num_arms(),
                               learning_columns);
      }));
  result.files.push_back(write_file(dir / "summary.csv", [&](std::ostream& os) {
    write_summary_csv(os, result.summary);
  }));

  report << "mode " << mode << ", instance " << config.instance_name << ", "
         << config.replications << " replication(s)\n";
  append_final_state(report, result.summary, result.replications.back().back());
  for (const auto& f : result.files) report << "wrote " << f << '\n';
  result.report = report.str();
  return result;
}

}  // namespace fwsp
