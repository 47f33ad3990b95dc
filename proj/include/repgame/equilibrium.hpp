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

#ifndef REPGAME_EQUILIBRIUM_HPP_
#define REPGAME_EQUILIBRIUM_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "repgame/game.hpp"

namespace repgame {

class NoValidEquilibrium : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Set of strategies, bit i set for strategy i (R=0, C=1, D=2).
class Support {
 public:
  constexpr Support() = default;
  constexpr explicit Support(std::uint8_t bits) : bits_(bits & 0x7u) {}
  static constexpr Support of(std::initializer_list<Strategy> members) {
    std::uint8_t bits = 0;
    for (Strategy s : members) bits |= static_cast<std::uint8_t>(1u << index(s));
    return Support(bits);
  }
  static Support inferred(const PopulationState& state, double eps = 0.0);

  constexpr bool contains(Strategy s) const { return (bits_ >> index(s)) & 1u; }
  constexpr int size() const { return (bits_ & 1u) + ((bits_ >> 1) & 1u) + ((bits_ >> 2) & 1u); }
  constexpr bool full() const { return bits_ == 0x7u; }
  constexpr std::uint8_t bits() const { return bits_; }
  std::string to_string() const;  // e.g. "RD"

  constexpr bool operator==(const Support&) const = default;

 private:
  std::uint8_t bits_ = 0;
};

// Symmetric pure profile (s, s).
struct PureProfileResult {
  Strategy strategy = Strategy::D;
  bool is_nash = false;
  bool is_strict = false;
  bool is_ess = false;
};

std::vector<PureProfileResult> pure_nash(GameVariant variant, const GameParams& params,
                                         const PopulationCounts& counts);

struct EssVerdict {
  bool is_ess = false;
  std::string explanation;
};

// Maynard Smith test against each alternative pure strategy:
// u(s,s) > u(t,s), or u(s,s) == u(t,s) and u(s,t) > u(t,t).
EssVerdict ess_check(GameVariant variant, const GameParams& params,
                     const PopulationCounts& counts, Strategy s);
EssVerdict ess_check(const PayoffMatrix& matrix, Strategy s, double tol = 1e-9);

struct MixedEquilibrium {
  std::string label;        // which closed form produced it, e.g. "full", "RD-mix"
  PopulationState state;    // may lie outside the simplex when valid == false
  Support support;
  bool valid = false;
  std::string validity_note;
};

// All closed-form mixed equilibria for the variant, valid or not. Counts that
// appear in the formulas are substituted as component * N.
std::vector<MixedEquilibrium> mixed_candidates(GameVariant variant, const GameParams& params);

// The full-support candidate only (used by sweeps).
MixedEquilibrium full_support_candidate(GameVariant variant, const GameParams& params);

// mixed_candidates, throwing NoValidEquilibrium if no candidate lies in [0,1]^3.
std::vector<MixedEquilibrium> mixed_closed_form(GameVariant variant, const GameParams& params);

// Checks the equilibrium conditions directly through expected_payoffs:
// on-simplex, support strictly positive, support payoffs equal within `tol`
// and no off-support strategy better by more than `tol`.
bool satisfies_equilibrium(GameVariant variant, const GameParams& params,
                           const PopulationState& state, Support support, double tol = 1e-9);

struct OracleCluster {
  PopulationState state;  // mean of the member roots
  Support support;
  double best_spread = 0.0;  // smallest exact support payoff spread among members
  std::size_t members = 0;
};

inline constexpr int kMinOracleGrid = 50;

// Brute-force search at lattice resolution 1/grid, independent of the closed
// forms: payoffs are evaluated at every lattice point, and the zeros of their
// piecewise-linear interpolant are collected from every lattice triangle
// (full support) and boundary segment (two strategies, absent strategy no
// better by more than 1/grid). Nearby roots with one support form a cluster.
std::vector<OracleCluster> mixed_oracle(GameVariant variant, const GameParams& params,
                                        int grid);

enum class Regime { C_ESS, C_WEAK_NASH, D_NASH, MIXED, R_ESS, NONE };

std::string_view to_string(Regime r);

struct Threshold {
  std::string name;
  double value = 0.0;
};

struct RegimeReport {
  GameVariant variant = GameVariant::Baseline;
  GameParams params;
  PopulationCounts counts;
  Regime regime = Regime::NONE;
  std::string triggered_condition;
  std::vector<Threshold> thresholds;
  std::string drift_bound;  // empty for Baseline
  double drift_bound_value = 0.0;
  std::vector<PureProfileResult> pure;
  std::vector<MixedEquilibrium> mixed;  // attached for MIXED and Baseline
};

RegimeReport regime(GameVariant variant, const GameParams& params,
                    const PopulationCounts& counts);

}  // namespace repgame

#endif  // REPGAME_EQUILIBRIUM_HPP_
