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

#ifndef REPGAME_KERNELS_HPP_
#define REPGAME_KERNELS_HPP_

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP version producing identical output; the serial versions are kept
// for tests and for the benchmark baseline.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "repgame/equilibrium.hpp"
#include "repgame/game.hpp"

namespace repgame::kernels {

// Expected payoffs at every lattice point (i/grid, j/grid, (grid-i-j)/grid).
// Points where the payment pool is empty hold NaN.
class LatticePayoffs {
 public:
  LatticePayoffs() = default;
  explicit LatticePayoffs(int grid);

  int grid() const { return grid_; }
  const ExpectedPayoffs& at(int i, int j) const { return values_[offset(i, j)]; }
  ExpectedPayoffs& at(int i, int j) { return values_[offset(i, j)]; }
  PopulationState point(int i, int j) const;

  bool operator==(const LatticePayoffs& other) const;

 private:
  std::size_t offset(int i, int j) const {
    // Row i holds grid - i + 1 points.
    const auto ii = static_cast<std::size_t>(i);
    return ii * static_cast<std::size_t>(grid_ + 1) - ii * (ii - 1) / 2 + static_cast<std::size_t>(j);
  }

  int grid_ = 0;
  std::vector<ExpectedPayoffs> values_;
};

LatticePayoffs evaluate_lattice_serial(GameVariant variant, const GameParams& params, int grid);
LatticePayoffs evaluate_lattice_parallel(GameVariant variant, const GameParams& params, int grid);

// Zero of the piecewise-linear interpolant of the support payoff differences.
// Full-support roots come from lattice triangles, two-strategy roots from the
// boundary segments; a boundary root is kept only if the absent strategy earns
// at most `off_tol` more there. `residual` is the exact payoff spread over the
// support at `state`.
struct RootHit {
  PopulationState state;
  Support support;
  double residual = 0.0;

  bool operator==(const RootHit&) const = default;
};

// Interior roots row by row, then the R/D, C/D and R/C edges in lattice order.
std::vector<RootHit> find_roots_serial(GameVariant variant, const GameParams& params,
                                       const LatticePayoffs& lattice, double off_tol);
std::vector<RootHit> find_roots_parallel(GameVariant variant, const GameParams& params,
                                         const LatticePayoffs& lattice, double off_tol);

// Number of matched pairs by (row strategy, partner strategy); counts both
// orientations, so tally[s][t] is the number of s-agents whose partner is t.
using PairTally = std::array<std::array<std::int64_t, 3>, 3>;

// Agents order[2k] and order[2k+1] are partners; a trailing odd agent is ignored.
PairTally tally_pairs_serial(std::span<const Strategy> strategies,
                             std::span<const std::int32_t> order);
PairTally tally_pairs_parallel(std::span<const Strategy> strategies,
                               std::span<const std::int32_t> order);

// Writes matrix(s_i, s_partner) for every matched agent.
void assign_payoffs_serial(std::span<const Strategy> strategies,
                           std::span<const std::int32_t> order, const PayoffMatrix& matrix,
                           std::span<double> payoffs);
void assign_payoffs_parallel(std::span<const Strategy> strategies,
                             std::span<const std::int32_t> order, const PayoffMatrix& matrix,
                             std::span<double> payoffs);

int max_threads();

}  // namespace repgame::kernels

#endif  // REPGAME_KERNELS_HPP_
