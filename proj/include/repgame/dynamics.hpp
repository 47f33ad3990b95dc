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

#ifndef REPGAME_DYNAMICS_HPP_
#define REPGAME_DYNAMICS_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "repgame/game.hpp"

namespace repgame {

// Seeded random stream owned by one simulation. Draws are derived from the
// raw 64-bit engine output so sequences do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

struct PaymentPolicy {
  enum class Kind { kFixed, kEssCooperators, kEssReputers };

  Kind kind = Kind::kFixed;
  double value = 0.0;  // p for kFixed, epsilon otherwise

  static PaymentPolicy fixed(double p) { return {Kind::kFixed, p}; }
  static PaymentPolicy ess_cooperators(double epsilon) { return {Kind::kEssCooperators, epsilon}; }
  static PaymentPolicy ess_reputers(double epsilon) { return {Kind::kEssReputers, epsilon}; }

  bool operator==(const PaymentPolicy&) const = default;
};

// Throws std::invalid_argument for negative p or non-positive epsilon.
void validate_policy(const PaymentPolicy& policy);

// kFixed -> p; kEssCooperators -> a(1 - n_d/N) + eps; kEssReputers -> n_r alpha/N + eps.
double payment_for_round(const PaymentPolicy& policy, const GameParams& params,
                         const PopulationCounts& counts);
// Same rule with mean-field fractions in place of n/N.
double payment_for_state(const PaymentPolicy& policy, const GameParams& params,
                         const PopulationState& state);
// Largest payment the policy can charge.
double max_payment(const PaymentPolicy& policy, const GameParams& params);

// Static payoff-spread bound d + beta + p_max + a + alpha used to turn payoff
// differences into switching probabilities. p_max is 0 for Baseline.
double imitation_normalizer(GameVariant variant, const GameParams& params,
                            const PaymentPolicy& policy);

struct EvolveConfig {
  GameVariant variant = GameVariant::Baseline;
  GameParams params;
  PaymentPolicy policy;
  PopulationState init{1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::int64_t rounds_max = 20000;
  double mutation_rate = 0.0;
  double convergence_tol = 1e-3;
  std::uint64_t seed = 0;
};

inline constexpr int kConvergenceWindow = 50;

// Throws std::invalid_argument when the config is unusable.
void validate_config(const EvolveConfig& config);

// Fee bookkeeping for one round; fees == redistributed + burned.
struct Budget {
  double fees = 0.0;
  double redistributed = 0.0;
  double burned = 0.0;
};

struct RoundRecord {
  std::int64_t round = 0;
  PopulationState state;       // composition that played this round
  PopulationCounts counts;
  double payment = 0.0;
  ExpectedPayoffs realized;    // per-strategy realized means; NaN when extinct
  bool pool_burned = false;
  Budget budget;
};

class Population {
 public:
  Population() = default;
  Population(std::vector<Strategy> strategies, std::uint64_t rng_seed);

  std::span<const Strategy> strategies() const { return strategies_; }
  std::span<const double> round_payoffs() const { return round_payoffs_; }
  std::uint64_t rng_seed() const { return rng_seed_; }
  std::int64_t size() const { return static_cast<std::int64_t>(strategies_.size()); }
  const PopulationCounts& counts() const { return counts_; }
  PopulationState state() const { return state_from_counts(counts_); }

 private:
  friend RoundRecord run_round(Population&, GameVariant, const GameParams&,
                               const PaymentPolicy&, Rng&, double);

  std::vector<Strategy> strategies_;
  std::vector<Strategy> next_;
  std::vector<double> round_payoffs_;
  std::vector<std::int32_t> order_;
  PopulationCounts counts_;
  std::uint64_t rng_seed_ = 0;
};

// Exactly counts_from_state(init, N) agents per strategy, shuffled with the seed.
Population init_population(const EvolveConfig& config);

// One selection / transaction / reproduction / mutation round. The five-argument
// overload uses no mutation.
RoundRecord run_round(Population& pop, GameVariant variant, const GameParams& params,
                      const PaymentPolicy& policy, Rng& rng);
RoundRecord run_round(Population& pop, GameVariant variant, const GameParams& params,
                      const PaymentPolicy& policy, Rng& rng, double mutation_rate);

enum class Terminal { kConverged, kMaxRounds };

struct Trajectory {
  EvolveConfig config;
  std::vector<RoundRecord> records;
  Terminal terminal = Terminal::kMaxRounds;
  PopulationState final_state;  // after the last recorded round
  PopulationCounts final_counts;
};

Trajectory evolve(const EvolveConfig& config);

// Independent runs of `config` for each seed. The parallel version runs seeds
// concurrently; results are identical to the serial one and ordered like `seeds`.
std::vector<Trajectory> run_ensemble_serial(const EvolveConfig& config,
                                            std::span<const std::uint64_t> seeds);
std::vector<Trajectory> run_ensemble(const EvolveConfig& config,
                                     std::span<const std::uint64_t> seeds);

// Deterministic mean-field comparator: x_s += dt x_s (P_s - P_bar) / normalizer.
PopulationState replicator_step(const PopulationState& state, GameVariant variant,
                                const GameParams& params, const PaymentPolicy& policy,
                                double dt);

}  // namespace repgame

#endif  // REPGAME_DYNAMICS_HPP_
