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

#ifndef REPGAME_GAME_HPP_
#define REPGAME_GAME_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace repgame {

// Row/column order everywhere is R, C, D.
enum class Strategy : std::uint8_t { R = 0, C = 1, D = 2 };

inline constexpr std::array<Strategy, 3> kStrategies = {Strategy::R, Strategy::C,
                                                        Strategy::D};
inline constexpr int kNumStrategies = 3;

constexpr int index(Strategy s) { return static_cast<int>(s); }

// Cooperation and reputation-calculation levels, both in {0, 1}.
struct Levels {
  int cooperation;
  int reputation;
};

constexpr Levels levels(Strategy s) {
  switch (s) {
    case Strategy::R: return {1, 1};
    case Strategy::C: return {1, 0};
    case Strategy::D: return {0, 0};
  }
  return {0, 0};
}

char to_char(Strategy s);
std::optional<Strategy> strategy_from_char(char c);

enum class GameVariant : std::uint8_t {
  Baseline = 1,        // no payment
  PayCooperators = 2,  // fee redistributed to R and C
  PayReputers = 3,     // fee redistributed to R only
};

std::string_view to_string(GameVariant v);
std::optional<GameVariant> variant_from_number(int game);

struct GameParams {
  double d = 0.0;      // benefit of a served request
  double a = 0.0;      // cost of serving
  double alpha = 0.0;  // cost of reputation calculation
  double beta = 0.0;   // benefit of a reputation increment
  double p = 0.0;      // round-based payment collected from every peer
  std::int64_t n = 2;  // population size

  bool operator==(const GameParams&) const = default;
};

class ConstraintViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when the redistribution pool of a paying variant has no recipients.
class DegeneratePool : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Returns `raw` unchanged when d > a > alpha >= 0, beta >= 0, p >= 0, n >= 2.
GameParams validate_params(const GameParams& raw);

// Fractions of R, C and D users. Not self-validating: closed-form equilibria
// outside the simplex are represented with this type too.
struct PopulationState {
  double x_r = 0.0;
  double x_c = 0.0;
  double x_d = 0.0;

  double operator[](Strategy s) const {
    return s == Strategy::R ? x_r : (s == Strategy::C ? x_c : x_d);
  }
  double& operator[](Strategy s) {
    return s == Strategy::R ? x_r : (s == Strategy::C ? x_c : x_d);
  }
  double sum() const { return x_r + x_c + x_d; }
  // Components in [0, 1] and summing to one within `tol`.
  bool on_simplex(double tol = 1e-12) const;

  bool operator==(const PopulationState&) const = default;
};

// Throws std::invalid_argument unless `s.on_simplex(tol)`.
PopulationState make_state(double x_r, double x_c, double x_d, double tol = 1e-12);
PopulationState vertex(Strategy s);
double l1_distance(const PopulationState& lhs, const PopulationState& rhs);

struct PopulationCounts {
  std::int64_t n_r = 0;
  std::int64_t n_c = 0;
  std::int64_t n_d = 0;

  std::int64_t operator[](Strategy s) const {
    return s == Strategy::R ? n_r : (s == Strategy::C ? n_c : n_d);
  }
  std::int64_t& operator[](Strategy s) {
    return s == Strategy::R ? n_r : (s == Strategy::C ? n_c : n_d);
  }
  std::int64_t total() const { return n_r + n_c + n_d; }

  bool operator==(const PopulationCounts&) const = default;
};

// Largest-remainder rounding of n * state; the result always sums to n.
PopulationCounts counts_from_state(const PopulationState& state, std::int64_t n);
PopulationState state_from_counts(const PopulationCounts& counts);

// What to do when a paying variant has nobody to redistribute to.
enum class EmptyPool { kThrow, kBurn };

struct PayoffMatrix {
  std::array<std::array<double, 3>, 3> u{};

  double operator()(Strategy row, Strategy col) const {
    return u[index(row)][index(col)];
  }
};

struct ExpectedPayoffs {
  double p_r = 0.0;
  double p_c = 0.0;
  double p_d = 0.0;
  double p_bar = 0.0;

  double operator[](Strategy s) const {
    return s == Strategy::R ? p_r : (s == Strategy::C ? p_c : p_d);
  }
  double& operator[](Strategy s) {
    return s == Strategy::R ? p_r : (s == Strategy::C ? p_c : p_d);
  }
};

// Pairwise interaction payoff without any payment terms.
double base_utility(const GameParams& params, Strategy self, Strategy partner);

// Gross redistribution share received by one member of the recipient pool
// (N * p / pool size). Zero for Baseline. Pool sizes are real so that the
// mean-field code can pass N * x.
double rebate_per_recipient(GameVariant variant, const GameParams& params, double n_r,
                            double n_d, EmptyPool on_empty = EmptyPool::kThrow);

// True if `s` belongs to the recipient pool of `variant`.
bool is_recipient(GameVariant variant, Strategy s);

double utility(GameVariant variant, const GameParams& params,
               const PopulationCounts& counts, Strategy self, Strategy partner);

PayoffMatrix payoff_matrix(GameVariant variant, const GameParams& params,
                           const PopulationCounts& counts,
                           EmptyPool on_empty = EmptyPool::kThrow);

// Mean-field matrix: counts are N * state, not rounded.
PayoffMatrix payoff_matrix(GameVariant variant, const GameParams& params,
                           const PopulationState& state,
                           EmptyPool on_empty = EmptyPool::kThrow);

ExpectedPayoffs expected_payoffs(GameVariant variant, const GameParams& params,
                                 const PopulationState& state,
                                 EmptyPool on_empty = EmptyPool::kThrow);

// Row averages of `matrix` weighted by `state`.
ExpectedPayoffs expected_payoffs(const PayoffMatrix& matrix, const PopulationState& state);

}  // namespace repgame

#endif  // REPGAME_GAME_HPP_
