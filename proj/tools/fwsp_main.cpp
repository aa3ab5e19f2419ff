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

// fwsp <mode> --config <file> [--paper-scale] [--seed N] [--out DIR]

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fwsp/fwsp.h"

namespace {

constexpr int kConfigExit = 1;

std::optional<fwsp_mode> mode_from(const std::string& name) {
  if (name == "run") return FWSP_MODE_RUN;
  if (name == "flow") return FWSP_MODE_FLOW;
  if (name == "learn") return FWSP_MODE_LEARN;
  if (name == "solve") return FWSP_MODE_SOLVE;
  if (name == "check") return FWSP_MODE_CHECK;
  return std::nullopt;
}

int report_failure(fwsp_status status) {
  std::cerr << "fwsp: " << fwsp_status_string(status);
  const char* msg = fwsp_last_error_message();
  if (msg && *msg) std::cerr << ": " << msg;
  std::cerr << '\n';
  return fwsp_status_exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frank-Wolfe self-play for pure-exploration bandits"};
  std::string mode_name;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool paper_scale = false;
  app.add_option("mode", mode_name, "run, flow, learn, solve or check")
      ->required()
      ->check(CLI::IsMember({"run", "flow", "learn", "solve", "check"}));
  app.add_option("--config", config_path, "JSON experiment config")
      ->check(CLI::ExistingFile);
  app.add_flag("--paper-scale", paper_scale, "use 1e7 iterations");
  app.add_option("--seed", seed, "base seed (overrides the config)");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  std::string config_text;
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << "fwsp: cannot read " << config_path << '\n';
      return kConfigExit;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    config_text = buf.str();
  } else if (mode_name != "check") {
    std::cerr << "fwsp: --config is required for mode " << mode_name << '\n';
    return kConfigExit;
  }

  fwsp_experiment* exp = nullptr;
  fwsp_status s = fwsp_experiment_create(
      config_text.empty() ? nullptr : config_text.c_str(), &exp);
  if (s != FWSP_OK) return report_failure(s);

  // The positional mode wins over a mode given in the config.
  s = fwsp_experiment_set_mode(exp, *mode_from(mode_name));
  if (s == FWSP_OK && seed) s = fwsp_experiment_set_seed(exp, *seed);
  if (s == FWSP_OK && out_dir) {
    s = fwsp_experiment_set_output_dir(exp, out_dir->c_str());
  }
  if (s == FWSP_OK) s = fwsp_experiment_set_paper_scale(exp, paper_scale);
  if (s == FWSP_OK) s = fwsp_experiment_run(exp);

  std::cout << fwsp_experiment_report(exp);
  fwsp_experiment_destroy(exp);
  return s == FWSP_OK ? 0 : report_failure(s);
}
