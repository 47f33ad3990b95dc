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

#include "repgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace repgame {

char to_char(Strategy s) {
  switch (s) {
    case Strategy::R: return 'R';
    case Strategy::C: return 'C';
    case Strategy::D: return 'D';
  }
  return '?';
}

std::optional<Strategy> strategy_from_char(char c) {
  switch (c) {
    case 'R': return Strategy::R;
    case 'C': return Strategy::C;
    case 'D': return Strategy::D;
    default: return std::nullopt;
  }
}

std::string_view to_string(GameVariant v) {
  switch (v) {
    case GameVariant::Baseline: return "baseline";
    case GameVariant::PayCooperators: return "pay-cooperators";
    case GameVariant::PayReputers: return "pay-reputers";
  }
  return "unknown";
}

std::optional<GameVariant> variant_from_number(int game) {
  switch (game) {
    case 1: return GameVariant::Baseline;
    case 2: return GameVariant::PayCooperators;
    case 3: return GameVariant::PayReputers;
    default: return std::nullopt;
  }
}

GameParams validate_params(const GameParams& raw) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(raw.d) || !finite(raw.a) || !finite(raw.alpha) || !finite(raw.beta) ||
      !finite(raw.p)) {
    throw ConstraintViolation("parameters must be finite");
  }
  if (!(raw.d > raw.a)) throw ConstraintViolation("d>a violated (d<=a)");
  if (!(raw.a > raw.alpha)) throw ConstraintViolation("a>alpha violated (a<=alpha)");
  if (raw.alpha < 0.0) throw ConstraintViolation("alpha>=0 violated (negative alpha)");
  if (raw.beta < 0.0) throw ConstraintViolation("beta>=0 violated (negative beta)");
  if (raw.p < 0.0) throw ConstraintViolation("p>=0 violated (negative p)");
  if (raw.n < 2) throw ConstraintViolation("N>=2 violated (N<2)");
  return raw;
}

bool PopulationState::on_simplex(double tol) const {
  for (Strategy s : kStrategies) {
    const double x = (*this)[s];
    if (!(x >= 0.0 && x <= 1.0)) return false;
  }
  return std::abs(sum() - 1.0) <= tol;
}

PopulationState make_state(double x_r, double x_c, double x_d, double tol) {
  PopulationState s{x_r, x_c, x_d};
  if (!s.on_simplex(tol)) {
    throw std::invalid_argument("population state is not on the simplex");
  }
  return s;
}

PopulationState vertex(Strategy s) {
  PopulationState v;
  v[s] = 1.0;
  return v;
}

double l1_distance(const PopulationState& lhs, const PopulationState& rhs) {
  return std::abs(lhs.x_r - rhs.x_r) + std::abs(lhs.x_c - rhs.x_c) +
         std::abs(lhs.x_d - rhs.x_d);
}

PopulationCounts counts_from_state(const PopulationState& state, std::int64_t n) {
  if (n < 0) throw std::invalid_argument("population size must be nonnegative");
  const double total = state.sum();
  if (!(total > 0.0)) throw std::invalid_argument("population state has zero mass");
  PopulationCounts counts;
  std::array<double, 3> remainder{};
  std::int64_t assigned = 0;
  for (Strategy s : kStrategies) {
    const double exact = std::max(0.0, state[s]) / total * static_cast<double>(n);
    const auto whole = std::min(n, static_cast<std::int64_t>(std::floor(exact)));
    counts[s] = whole;
    remainder[index(s)] = exact - static_cast<double>(whole);
    assigned += whole;
  }
  if (assigned > n) throw std::logic_error("largest-remainder rounding overshoot");
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int l, int r) { return remainder[l] > remainder[r]; });
  for (std::int64_t left = n - assigned, k = 0; left > 0; --left, ++k) {
    counts[kStrategies[order[k % 3]]] += 1;
  }
  return counts;
}

PopulationState state_from_counts(const PopulationCounts& counts) {
  const auto total = static_cast<double>(counts.total());
  if (total <= 0.0) throw std::invalid_argument("empty population");
  return {static_cast<double>(counts.n_r) / total, static_cast<double>(counts.n_c) / total,
          static_cast<double>(counts.n_d) / total};
}

double base_utility(const GameParams& params, Strategy self, Strategy partner) {
  const auto [cl_i, rl_i] = levels(self);
  const auto [cl_j, rl_j] = levels(partner);
  const double benefit = (cl_j * (1 - rl_j) + cl_i * rl_j * cl_j) * params.d;
  const double cost = (cl_i * (1 - rl_i) + cl_j * rl_i) * params.a;
  return benefit - cost - rl_i * params.alpha + (cl_i * rl_j) * params.beta;
}

bool is_recipient(GameVariant variant, Strategy s) {
  const auto [cl, rl] = levels(s);
  switch (variant) {
    case GameVariant::Baseline: return false;
    case GameVariant::PayCooperators: return cl == 1;
    case GameVariant::PayReputers: return rl * cl == 1;
  }
  return false;
}

double rebate_per_recipient(GameVariant variant, const GameParams& params, double n_r,
                            double n_d, EmptyPool on_empty) {
  const double big_n = static_cast<double>(params.n);
  double pool = 0.0;
  switch (variant) {
    case GameVariant::Baseline: return 0.0;
    case GameVariant::PayCooperators: pool = big_n - n_d; break;
    case GameVariant::PayReputers: pool = n_r; break;
  }
  if (!(pool > 0.0)) {
    if (on_empty == EmptyPool::kBurn) return 0.0;
    throw DegeneratePool(variant == GameVariant::PayCooperators
                             ? "no cooperative recipients (n_d = N)"
                             : "no reputation recipients (n_r = 0)");
  }
  return big_n * params.p / pool;
}

namespace {

double payment_fee(GameVariant variant, const GameParams& params) {
  return variant == GameVariant::Baseline ? 0.0 : params.p;
}

double cell(GameVariant variant, const GameParams& params, double rebate, Strategy self,
            Strategy partner) {
  const double share = is_recipient(variant, self) ? rebate : 0.0;
  return base_utility(params, self, partner) + share - payment_fee(variant, params);
}

PayoffMatrix matrix_from_rebate(GameVariant variant, const GameParams& params,
                                double rebate) {
  PayoffMatrix m;
  for (Strategy s : kStrategies) {
    for (Strategy t : kStrategies) m.u[index(s)][index(t)] = cell(variant, params, rebate, s, t);
  }
  return m;
}

void check_counts(GameVariant variant, const GameParams& params,
                  const PopulationCounts& counts) {
  if (variant == GameVariant::Baseline) return;
  if (counts.n_r < 0 || counts.n_c < 0 || counts.n_d < 0 || counts.total() != params.n) {
    throw std::invalid_argument("population counts must be nonnegative and sum to N");
  }
}

}  // namespace

double utility(GameVariant variant, const GameParams& params,
               const PopulationCounts& counts, Strategy self, Strategy partner) {
  check_counts(variant, params, counts);
  const double rebate = rebate_per_recipient(variant, params, static_cast<double>(counts.n_r),
                                             static_cast<double>(counts.n_d));
  return cell(variant, params, rebate, self, partner);
}

PayoffMatrix payoff_matrix(GameVariant variant, const GameParams& params,
                           const PopulationCounts& counts, EmptyPool on_empty) {
  check_counts(variant, params, counts);
  const double rebate =
      rebate_per_recipient(variant, params, static_cast<double>(counts.n_r),
                           static_cast<double>(counts.n_d), on_empty);
  return matrix_from_rebate(variant, params, rebate);
}

PayoffMatrix payoff_matrix(GameVariant variant, const GameParams& params,
                           const PopulationState& state, EmptyPool on_empty) {
  const double big_n = static_cast<double>(params.n);
  const double rebate =
      rebate_per_recipient(variant, params, state.x_r * big_n, state.x_d * big_n, on_empty);
  return matrix_from_rebate(variant, params, rebate);
}

ExpectedPayoffs expected_payoffs(const PayoffMatrix& matrix, const PopulationState& state) {
  ExpectedPayoffs out;
  for (Strategy s : kStrategies) {
    double acc = 0.0;
    for (Strategy t : kStrategies) acc += state[t] * matrix(s, t);
    out[s] = acc;
  }
  out.p_bar = state.x_r * out.p_r + state.x_c * out.p_c + state.x_d * out.p_d;
  return out;
}

ExpectedPayoffs expected_payoffs(GameVariant variant, const GameParams& params,
                                 const PopulationState& state, EmptyPool on_empty) {
  return expected_payoffs(payoff_matrix(variant, params, state, on_empty), state);
}

}  // namespace repgame
