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

#include "repgame/commands.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace repgame {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

const char* flag(bool b) { return b ? "true" : "false"; }

std::string state_text(const PopulationState& s) {
  return "(" + num(s.x_r) + ", " + num(s.x_c) + ", " + num(s.x_d) + ")";
}

}  // namespace

Analysis analyze(const RunConfig& config) {
  if (!config.init && config.game != GameVariant::Baseline) {
    throw ValidationError("init_r", "init_r/init_c/init_d are required to analyze a paying game");
  }
  Analysis out;
  out.variant = config.game;
  out.params = config.params;
  out.counts = counts_from_state(initial_state(config), config.params.n);
  out.params.p = config.game == GameVariant::Baseline
                     ? 0.0
                     : payment_for_round(config.payment, config.params, out.counts);
  validate_params(out.params);
  out.matrix = payoff_matrix(out.variant, out.params, out.counts);
  out.regime = regime(out.variant, out.params, out.counts);
  out.mixed = mixed_candidates(out.variant, out.params);
  return out;
}

std::string format_analysis_text(const Analysis& an) {
  std::string out;
  const GameParams& g = an.params;
  out += "game " + std::to_string(static_cast<int>(an.variant)) + " (" +
         std::string(to_string(an.variant)) + ")\n";
  out += "params d=" + num(g.d) + " a=" + num(g.a) + " alpha=" + num(g.alpha) +
         " beta=" + num(g.beta) + " p=" + num(g.p) + " N=" + std::to_string(g.n) + "\n";
  out += "counts n_r=" + std::to_string(an.counts.n_r) + " n_c=" + std::to_string(an.counts.n_c) +
         " n_d=" + std::to_string(an.counts.n_d) + "\n\n";

  out += "payoff matrix (row player)\n         R            C            D\n";
  for (Strategy s : kStrategies) {
    char line[96];
    std::snprintf(line, sizeof(line), "%c  %12.6g %12.6g %12.6g\n", to_char(s),
                  an.matrix(s, Strategy::R), an.matrix(s, Strategy::C),
                  an.matrix(s, Strategy::D));
    out += line;
  }

  out += "\npure symmetric profiles\nprofile  nash   strict  ess\n";
  for (const auto& pr : an.regime.pure) {
    char line[64];
    std::snprintf(line, sizeof(line), "(%c,%c)    %-6s %-7s %s\n", to_char(pr.strategy),
                  to_char(pr.strategy), flag(pr.is_nash), flag(pr.is_strict), flag(pr.is_ess));
    out += line;
  }

  out += "\nmixed equilibria\n";
  for (const auto& m : an.mixed) {
    out += "  " + m.label + " support=" + m.support.to_string() + " x=" + state_text(m.state) +
           (m.valid ? " valid" : " invalid");
    if (!m.validity_note.empty()) out += " (" + m.validity_note + ")";
    out += "\n";
  }

  out += "\nregime " + std::string(to_string(an.regime.regime)) + "\n";
  out += "  condition: " + an.regime.triggered_condition + "\n";
  for (const auto& t : an.regime.thresholds) out += "  threshold " + t.name + " = " + num(t.value) + "\n";
  if (!an.regime.drift_bound.empty()) {
    out += "  drift bound " + an.regime.drift_bound + " = " + num(an.regime.drift_bound_value) + "\n";
  }
  return out;
}

std::string format_analysis_csv(const Analysis& an) {
  std::string out = "kind,label,x_r,x_c,x_d,value,is_nash,is_strict,is_ess,valid\n";
  for (const auto& pr : an.regime.pure) {
    const PopulationState v = vertex(pr.strategy);
    out += std::string("pure,") + to_char(pr.strategy) + "," + num(v.x_r) + "," + num(v.x_c) +
           "," + num(v.x_d) + "," + num(an.matrix(pr.strategy, pr.strategy)) + "," +
           flag(pr.is_nash) + "," + flag(pr.is_strict) + "," + flag(pr.is_ess) + ",true\n";
  }
  for (const auto& m : an.mixed) {
    double value = std::numeric_limits<double>::quiet_NaN();
    if (m.valid) {
      try {
        const ExpectedPayoffs pay = expected_payoffs(an.variant, an.params, m.state);
        value = pay.p_bar;
      } catch (const DegeneratePool&) {
      }
    }
    out += "mixed," + m.label + "," + num(m.state.x_r) + "," + num(m.state.x_c) + "," +
           num(m.state.x_d) + "," + num(value) + "," + flag(m.valid) + ",false,false," +
           flag(m.valid) + "\n";
  }
  for (const auto& t : an.regime.thresholds) {
    out += "threshold," + t.name + ",,,," + num(t.value) + ",,,,\n";
  }
  out += "regime," + std::string(to_string(an.regime.regime)) + ",,,," + num(an.params.p) +
         ",,,,\n";
  return out;
}

std::vector<SweepRow> sweep(const RunConfig& config) {
  if (!config.sweep) throw ValidationError("sweep_param", "no sweep block in config");
  const SweepSpec range = *config.sweep;
  std::vector<SweepRow> rows(static_cast<std::size_t>(range.steps));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double base_p = config.game == GameVariant::Baseline ? 0.0 : config.payment.value;

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < range.steps; ++k) {
    SweepRow& row = rows[static_cast<std::size_t>(k)];
    row.param_value = sweep_value(range, k);
    GameParams g = config.params;
    g.p = base_p;
    switch (range.param) {
      case SweepParam::d: g.d = row.param_value; break;
      case SweepParam::a: g.a = row.param_value; break;
      case SweepParam::alpha: g.alpha = row.param_value; break;
      case SweepParam::beta: g.beta = row.param_value; break;
      case SweepParam::p: g.p = row.param_value; break;
    }
    row.state = {nan, nan, nan};
    try {
      validate_params(g);
      const MixedEquilibrium eq = full_support_candidate(config.game, g);
      row.state = eq.state;
      row.valid = eq.valid;
    } catch (const std::exception&) {
      row.valid = false;
    }
  }
  return rows;
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "param_value,x_r,x_c,x_d,valid\n";
  for (const auto& r : rows) {
    out += num(r.param_value) + "," + num(r.state.x_r) + "," + num(r.state.x_c) + "," +
           num(r.state.x_d) + "," + flag(r.valid) + "\n";
  }
  return out;
}

std::string format_trajectory_csv(const Trajectory& t) {
  std::string out = "round,x_r,x_c,x_d,p,pr_hat,pc_hat,pd_hat,pool_burned\n";
  for (const auto& r : t.records) {
    out += std::to_string(r.round) + "," + num(r.state.x_r) + "," + num(r.state.x_c) + "," +
           num(r.state.x_d) + "," + num(r.payment) + "," + num(r.realized.p_r) + "," +
           num(r.realized.p_c) + "," + num(r.realized.p_d) + "," + flag(r.pool_burned) + "\n";
  }
  return out;
}

int exit_code(Terminal terminal) { return terminal == Terminal::kConverged ? 0 : 2; }

}  // namespace repgame
