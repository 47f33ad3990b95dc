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

#ifndef REPGAME_COMMANDS_HPP_
#define REPGAME_COMMANDS_HPP_

#include <string>
#include <vector>

#include "repgame/config.hpp"
#include "repgame/dynamics.hpp"
#include "repgame/equilibrium.hpp"

namespace repgame {

// Equilibrium analysis at the configured composition. Counts are
// init * N (uniform when init is absent, which is only allowed for Baseline)
// and p is what the payment policy charges at those counts.
struct Analysis {
  GameVariant variant = GameVariant::Baseline;
  GameParams params;  // params.p filled in from the policy
  PopulationCounts counts;
  PayoffMatrix matrix;
  RegimeReport regime;
  std::vector<MixedEquilibrium> mixed;
};

Analysis analyze(const RunConfig& config);
std::string format_analysis_text(const Analysis& analysis);
// kind,label,x_r,x_c,x_d,value,is_nash,is_strict,is_ess,valid
std::string format_analysis_csv(const Analysis& analysis);

struct SweepRow {
  double param_value = 0.0;
  PopulationState state;
  bool valid = false;
};

// Full-support closed form at every sweep point. Points whose parameters are
// invalid or whose formula is undefined give NaN components and valid=false.
std::vector<SweepRow> sweep(const RunConfig& config);
std::string format_sweep_csv(const std::vector<SweepRow>& rows);

std::string format_trajectory_csv(const Trajectory& trajectory);

// 0 converged, 2 hit rounds_max.
int exit_code(Terminal terminal);

}  // namespace repgame

#endif  // REPGAME_COMMANDS_HPP_
