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

#include "repgame/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "repgame/kernels.hpp"

namespace repgame {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Round stream is decorrelated from the stream that shuffled the initial population.
std::uint64_t round_stream_seed(std::uint64_t seed) { return splitmix64(seed ^ 0x5eedULL); }

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

std::uint64_t Rng::below(std::uint64_t bound) {
  // Rejection sampling on the top of the range keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

void validate_policy(const PaymentPolicy& policy) {
  if (!std::isfinite(policy.value)) throw std::invalid_argument("payment value must be finite");
  if (policy.kind == PaymentPolicy::Kind::kFixed) {
    if (policy.value < 0.0) throw std::invalid_argument("fixed payment must be >= 0");
  } else if (!(policy.value > 0.0)) {
    throw std::invalid_argument("payment epsilon must be > 0");
  }
}

double payment_for_state(const PaymentPolicy& policy, const GameParams& params,
                         const PopulationState& state) {
  double p = 0.0;
  switch (policy.kind) {
    case PaymentPolicy::Kind::kFixed: p = policy.value; break;
    case PaymentPolicy::Kind::kEssCooperators:
      p = params.a * (1.0 - state.x_d) + policy.value;
      break;
    case PaymentPolicy::Kind::kEssReputers: p = state.x_r * params.alpha + policy.value; break;
  }
  return std::max(0.0, p);
}

double payment_for_round(const PaymentPolicy& policy, const GameParams& params,
                         const PopulationCounts& counts) {
  const double big_n = static_cast<double>(params.n);
  double p = 0.0;
  switch (policy.kind) {
    case PaymentPolicy::Kind::kFixed: p = policy.value; break;
    case PaymentPolicy::Kind::kEssCooperators:
      p = params.a * (1.0 - static_cast<double>(counts.n_d) / big_n) + policy.value;
      break;
    case PaymentPolicy::Kind::kEssReputers:
      p = static_cast<double>(counts.n_r) * params.alpha / big_n + policy.value;
      break;
  }
  return std::max(0.0, p);
}

double max_payment(const PaymentPolicy& policy, const GameParams& params) {
  switch (policy.kind) {
    case PaymentPolicy::Kind::kFixed: return policy.value;
    case PaymentPolicy::Kind::kEssCooperators: return params.a + policy.value;
    case PaymentPolicy::Kind::kEssReputers: return params.alpha + policy.value;
  }
  return policy.value;
}

double imitation_normalizer(GameVariant variant, const GameParams& params,
                            const PaymentPolicy& policy) {
  const double p_max = variant == GameVariant::Baseline ? 0.0 : max_payment(policy, params);
  return params.d + params.beta + p_max + params.a + params.alpha;
}

void validate_config(const EvolveConfig& config) {
  validate_params(config.params);
  validate_policy(config.policy);
  if (config.rounds_max < 1) throw std::invalid_argument("rounds_max must be >= 1");
  if (!(config.mutation_rate >= 0.0 && config.mutation_rate < 1.0)) {
    throw std::invalid_argument("mutation rate must lie in [0, 1)");
  }
  if (!(config.convergence_tol >= 0.0)) {
    throw std::invalid_argument("convergence tolerance must be >= 0");
  }
  if (!config.init.on_simplex(1e-6)) {
    throw std::invalid_argument("initial state must lie on the simplex");
  }
  if (config.params.n > std::numeric_limits<std::int32_t>::max()) {
    throw std::invalid_argument("population too large");
  }
}

Population::Population(std::vector<Strategy> strategies, std::uint64_t rng_seed)
    : strategies_(std::move(strategies)), rng_seed_(rng_seed) {
  for (Strategy s : strategies_) counts_[s] += 1;
  round_payoffs_.assign(strategies_.size(), 0.0);
}

Population init_population(const EvolveConfig& config) {
  const PopulationCounts counts = counts_from_state(config.init, config.params.n);
  std::vector<Strategy> agents;
  agents.reserve(static_cast<std::size_t>(config.params.n));
  for (Strategy s : kStrategies) agents.insert(agents.end(), counts[s], s);
  Rng rng(config.seed);
  shuffle(agents, rng);
  return Population(std::move(agents), config.seed);
}

RoundRecord run_round(Population& pop, GameVariant variant, const GameParams& params,
                      const PaymentPolicy& policy, Rng& rng) {
  return run_round(pop, variant, params, policy, rng, 0.0);
}

RoundRecord run_round(Population& pop, GameVariant variant, const GameParams& params,
                      const PaymentPolicy& policy, Rng& rng, double mutation_rate) {
  const auto n = static_cast<std::size_t>(pop.size());
  if (n < 2) throw std::invalid_argument("population needs at least two agents");
  if (static_cast<std::int64_t>(n) != params.n) {
    throw std::invalid_argument("population size differs from N");
  }

  RoundRecord rec;
  rec.counts = pop.counts_;
  rec.state = state_from_counts(rec.counts);

  GameParams round_params = params;
  rec.payment = variant == GameVariant::Baseline ? 0.0
                                                 : payment_for_round(policy, params, rec.counts);
  round_params.p = rec.payment;
  const double rebate = rebate_per_recipient(variant, round_params,
                                             static_cast<double>(rec.counts.n_r),
                                             static_cast<double>(rec.counts.n_d), EmptyPool::kBurn);
  const bool pool_empty = (variant == GameVariant::PayCooperators && rec.counts.n_d == params.n) ||
                          (variant == GameVariant::PayReputers && rec.counts.n_r == 0);
  rec.pool_burned = pool_empty && rec.payment > 0.0;
  const PayoffMatrix matrix = payoff_matrix(variant, round_params, rec.counts, EmptyPool::kBurn);

  // Selection: uniform random perfect matching; with odd n the last agent sits out.
  if (pop.order_.size() != n) {
    pop.order_.resize(n);
    for (std::size_t i = 0; i < n; ++i) pop.order_[i] = static_cast<std::int32_t>(i);
  }
  shuffle(pop.order_, rng);
  const std::span<const std::int32_t> matched(pop.order_.data(), n - n % 2);

  // Transaction.
  const auto tally = kernels::tally_pairs_parallel(pop.strategies_, matched);
  kernels::assign_payoffs_parallel(pop.strategies_, matched, matrix, pop.round_payoffs_);
  const double fee = variant == GameVariant::Baseline ? 0.0 : rec.payment;
  std::optional<Strategy> sitter;
  if (n % 2 == 1) {
    const auto who = static_cast<std::size_t>(pop.order_.back());
    sitter = pop.strategies_[who];
    pop.round_payoffs_[who] = -fee;
  }

  std::int64_t matched_recipients = 0;
  for (Strategy s : kStrategies) {
    if (!is_recipient(variant, s)) continue;
    for (Strategy t : kStrategies) matched_recipients += tally[index(s)][index(t)];
  }
  rec.budget.fees = fee * static_cast<double>(n);
  rec.budget.redistributed = rebate * static_cast<double>(matched_recipients);
  if (rec.pool_burned) {
    rec.budget.burned = rec.budget.fees;
  } else if (sitter && is_recipient(variant, *sitter)) {
    rec.budget.burned = rebate;
  }

  // Realized per-strategy means from the pair tally (exact, order independent).
  std::array<double, 3> mean{};
  double total = 0.0;
  for (Strategy s : kStrategies) {
    double sum = 0.0;
    for (Strategy t : kStrategies) {
      sum += static_cast<double>(tally[index(s)][index(t)]) * matrix(s, t);
    }
    if (sitter == s) sum -= fee;
    total += sum;
    const auto count = rec.counts[s];
    mean[index(s)] = count > 0 ? sum / static_cast<double>(count) : kNaN;
    rec.realized[s] = mean[index(s)];
  }
  rec.realized.p_bar = total / static_cast<double>(n);

  // Reproduction: an s-agent adopts t with probability x_t (P_t - P_s)^+ / normalizer.
  const double norm = imitation_normalizer(variant, params, policy);
  std::array<std::array<double, 3>, 3> cumulative{};
  std::array<bool, 3> may_switch{};
  for (Strategy s : kStrategies) {
    if (rec.counts[s] == 0) continue;
    std::array<double, 3> prob{};
    double sum = 0.0;
    for (Strategy t : kStrategies) {
      if (t == s || rec.counts[t] == 0) continue;
      const double gain = mean[index(t)] - mean[index(s)];
      if (gain > 0.0) {
        prob[index(t)] = rec.state[t] * gain / norm;
        sum += prob[index(t)];
      }
    }
    const double scale = sum > 1.0 ? 1.0 / sum : 1.0;
    double acc = 0.0;
    for (int t = 0; t < 3; ++t) {
      acc += prob[t] * scale;
      cumulative[index(s)][t] = acc;
    }
    may_switch[index(s)] = acc > 0.0;
  }

  pop.next_ = pop.strategies_;
  for (std::size_t i = 0; i < n; ++i) {
    const Strategy s = pop.strategies_[i];
    if (may_switch[index(s)]) {
      const double u = rng.uniform();
      const auto& cum = cumulative[index(s)];
      for (int t = 0; t < 3; ++t) {
        if (u < cum[t]) {
          pop.next_[i] = kStrategies[t];
          break;
        }
      }
    }
  }
  if (mutation_rate > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.uniform() < mutation_rate) pop.next_[i] = kStrategies[rng.below(3)];
    }
  }
  pop.strategies_.swap(pop.next_);
  pop.counts_ = PopulationCounts{};
  for (Strategy s : pop.strategies_) pop.counts_[s] += 1;

  return rec;
}

Trajectory evolve(const EvolveConfig& config) {
  validate_config(config);
  Trajectory traj;
  traj.config = config;
  Population pop = init_population(config);
  Rng rng(round_stream_seed(config.seed));
  traj.records.reserve(static_cast<std::size_t>(std::min<std::int64_t>(config.rounds_max, 1 << 16)));

  int settled = 0;
  for (std::int64_t r = 0; r < config.rounds_max; ++r) {
    RoundRecord rec =
        run_round(pop, config.variant, config.params, config.policy, rng, config.mutation_rate);
    rec.round = r;
    bool near_vertex = false;
    for (Strategy s : kStrategies) {
      if (l1_distance(rec.state, vertex(s)) <= config.convergence_tol) near_vertex = true;
    }
    settled = near_vertex ? settled + 1 : 0;
    traj.records.push_back(rec);
    if (settled >= kConvergenceWindow) {
      traj.terminal = Terminal::kConverged;
      break;
    }
  }
  traj.final_counts = pop.counts();
  traj.final_state = pop.state();
  return traj;
}

std::vector<Trajectory> run_ensemble_serial(const EvolveConfig& config,
                                            std::span<const std::uint64_t> seeds) {
  std::vector<Trajectory> out;
  out.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    EvolveConfig c = config;
    c.seed = seed;
    out.push_back(evolve(c));
  }
  return out;
}

std::vector<Trajectory> run_ensemble(const EvolveConfig& config,
                                     std::span<const std::uint64_t> seeds) {
  validate_config(config);
  std::vector<Trajectory> out(seeds.size());
  const auto count = static_cast<std::int64_t>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < count; ++k) {
    EvolveConfig c = config;
    c.seed = seeds[static_cast<std::size_t>(k)];
    out[static_cast<std::size_t>(k)] = evolve(c);
  }
  return out;
}

PopulationState replicator_step(const PopulationState& state, GameVariant variant,
                                const GameParams& params, const PaymentPolicy& policy,
                                double dt) {
  if (!(dt > 0.0 && dt <= 1.0)) throw std::invalid_argument("dt must lie in (0, 1]");
  if (!state.on_simplex(1e-9)) throw std::invalid_argument("state must lie on the simplex");
  GameParams step_params = params;
  step_params.p =
      variant == GameVariant::Baseline ? 0.0 : payment_for_state(policy, params, state);
  const ExpectedPayoffs pay = expected_payoffs(variant, step_params, state, EmptyPool::kBurn);
  const double norm = imitation_normalizer(variant, params, policy);

  PopulationState next;
  for (Strategy s : kStrategies) {
    next[s] = std::max(0.0, state[s] + dt * state[s] * (pay[s] - pay.p_bar) / norm);
  }
  const double total = next.sum();
  for (Strategy s : kStrategies) next[s] /= total;
  return next;
}

}  // namespace repgame
