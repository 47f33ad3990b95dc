// Copyright 2026 The repgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end:
//   repgame analyze|sweep|evolve <config-file> [--out PATH] [--csv] [--seed K]
// Exit status: 0 success / converged, 1 config error, 2 evolve hit rounds_max.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "repgame/commands.hpp"
#include "repgame/config.hpp"

namespace {

constexpr int kConfigError = 1;

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return static_cast<bool>(std::cout.flush());
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reputation games for P2P resource sharing: equilibria, sweeps, dynamics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  bool csv = false;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "key=value configuration file")->required();
    sub->add_option("--out", out_path, "write output here instead of stdout");
    sub->add_option("--seed", seed, "override the configured seed");
  };
  CLI::App* analyze = app.add_subcommand("analyze", "pure/mixed equilibria and payment regime");
  add_common(analyze);
  analyze->add_flag("--csv", csv, "machine-readable CSV instead of the text report");
  CLI::App* sweep = app.add_subcommand("sweep", "closed-form mixed equilibrium over a parameter");
  add_common(sweep);
  sweep->add_flag("--csv", csv, "accepted for symmetry; sweep output is always CSV");
  CLI::App* evolve = app.add_subcommand("evolve", "agent-based imitation dynamics");
  add_common(evolve);
  evolve->add_flag("--csv", csv, "accepted for symmetry; evolve output is always CSV");

  CLI11_PARSE(app, argc, argv);

  repgame::RunConfig config;
  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read " << config_path << "\n";
      return kConfigError;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    config = repgame::parse_config(buf.str());
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  bool seed_given = false;
  for (CLI::App* sub : {analyze, sweep, evolve}) {
    if (sub->parsed() && sub->count("--seed") > 0) seed_given = true;
  }
  if (seed_given) config.seed = seed;

  try {
    std::string text;
    int status = 0;
    if (analyze->parsed()) {
      const auto an = repgame::analyze(config);
      text = csv ? repgame::format_analysis_csv(an) : repgame::format_analysis_text(an);
    } else if (sweep->parsed()) {
      text = repgame::format_sweep_csv(repgame::sweep(config));
    } else {
      const auto traj = repgame::evolve(repgame::to_evolve_config(config));
      text = repgame::format_trajectory_csv(traj);
      status = repgame::exit_code(traj.terminal);
    }
    if (!write_output(out_path, text)) {
      std::cerr << "error: cannot write " << (out_path.empty() ? "stdout" : out_path) << "\n";
      return kConfigError;
    }
    return status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}
