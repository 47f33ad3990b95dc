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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "repgame/dynamics.hpp"
#include "repgame/equilibrium.hpp"

namespace repgame {
namespace {

using S = Strategy;

const GameParams kRef{8.0, 3.0, 2.0, 4.0, 0.0, 10000};
const PopulationState kBaselineEq{0.25, 1.0 / 12, 2.0 / 3};

EvolveConfig config_for(GameVariant v, GameParams g, PaymentPolicy policy, PopulationState init,
                        std::int64_t rounds = 200, std::uint64_t seed = 1) {
  EvolveConfig c;
  c.variant = v;
  c.params = g;
  c.policy = policy;
  c.init = init;
  c.rounds_max = rounds;
  c.seed = seed;
  return c;
}

bool same_records(const RoundRecord& a, const RoundRecord& b) {
  auto same = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
  return a.round == b.round && a.counts == b.counts && a.state == b.state &&
         a.payment == b.payment && same(a.realized.p_r, b.realized.p_r) &&
         same(a.realized.p_c, b.realized.p_c) && same(a.realized.p_d, b.realized.p_d) &&
         a.pool_burned == b.pool_burned && a.budget.fees == b.budget.fees &&
         a.budget.redistributed == b.budget.redistributed && a.budget.burned == b.budget.burned;
}

TEST_CASE("init_population") {
  GameParams g = kRef;
  g.n = 10;
  const Population small = init_population(config_for(GameVariant::Baseline, g, {}, {0.1, 0.2, 0.7}));
  CHECK(small.counts() == PopulationCounts{1, 2, 7});
  const auto cfg = config_for(GameVariant::Baseline, kRef, {}, {0.002, 0.001, 0.997});
  const Population big = init_population(cfg);
  CHECK(big.counts() == PopulationCounts{20, 10, 9970});
  const Population again = init_population(cfg);
  CHECK(std::equal(big.strategies().begin(), big.strategies().end(), again.strategies().begin()));
  auto other = cfg;
  other.seed = 2;
  const Population shuffled = init_population(other);
  CHECK(shuffled.counts() == big.counts());
  CHECK_FALSE(std::equal(big.strategies().begin(), big.strategies().end(),
                         shuffled.strategies().begin()));
}

TEST_CASE("payment schedules") {
  const GameParams g = kRef;
  CHECK(payment_for_round(PaymentPolicy::ess_cooperators(0.01), g, {2000, 1500, 6500}) ==
        doctest::Approx(1.06).epsilon(1e-14));
  CHECK(payment_for_round(PaymentPolicy::ess_reputers(0.01), g, {0, 5000, 5000}) ==
        doctest::Approx(0.01).epsilon(1e-14));
  CHECK(payment_for_round(PaymentPolicy::fixed(0.5), g, {1, 2, 9997}) == 0.5);
  CHECK(payment_for_state(PaymentPolicy::ess_reputers(0.01), g, {0.5, 0.25, 0.25}) ==
        doctest::Approx(1.01));
  CHECK(max_payment(PaymentPolicy::ess_cooperators(0.01), g) == doctest::Approx(3.01));
  CHECK(imitation_normalizer(GameVariant::Baseline, g, PaymentPolicy::fixed(5)) == 17.0);
  CHECK(imitation_normalizer(GameVariant::PayReputers, g, PaymentPolicy::ess_reputers(0.01)) ==
        doctest::Approx(19.01));
  CHECK_THROWS_AS(validate_policy(PaymentPolicy::fixed(-1)), std::invalid_argument);
  CHECK_THROWS_AS(validate_policy(PaymentPolicy::ess_reputers(0)), std::invalid_argument);
}

TEST_CASE("rng draws are portable and in range") {
  Rng a(42), b(42);
  for (int k = 0; k < 1000; ++k) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(a.below(3) == b.below(3));
  }
  std::mt19937_64 ref(42);
  CHECK(Rng(42).uniform() == static_cast<double>(ref() >> 11) * 0x1.0p-53);
}

TEST_CASE("all-D baseline population is absorbing") {
  auto cfg = config_for(GameVariant::Baseline, kRef, {}, vertex(S::D));
  Population pop = init_population(cfg);
  Rng rng(5);
  for (int r = 0; r < 5; ++r) {
    const RoundRecord rec = run_round(pop, cfg.variant, cfg.params, cfg.policy, rng);
    CHECK(rec.realized.p_d == 0.0);
    CHECK(std::isnan(rec.realized.p_r));
    for (double x : pop.round_payoffs()) CHECK(x == 0.0);
    CHECK(pop.counts() == PopulationCounts{0, 0, 10000});
  }
}

TEST_CASE("mutation redraws uniformly") {
  GameParams g = kRef;
  g.n = 100000;
  auto cfg = config_for(GameVariant::Baseline, g, {}, vertex(S::C));
  Population pop = init_population(cfg);
  Rng rng(9);
  const double expected = 0.001 * (2.0 / 3) * 100000;  // 66.7
  double total_left = 0;
  for (int r = 0; r < 20; ++r) {
    Population fresh = pop;
    run_round(fresh, cfg.variant, cfg.params, cfg.policy, rng, 0.001);
    total_left += static_cast<double>(100000 - fresh.counts().n_c);
  }
  const double mean = total_left / 20;
  CHECK(std::abs(mean - expected) < 3 * std::sqrt(expected / 20));
}

TEST_CASE("rounds conserve agents and balance the budget") {
  struct Case {
    GameVariant v;
    PaymentPolicy policy;
    PopulationState init;
    std::int64_t n;
  };
  const Case cases[] = {
      {GameVariant::Baseline, {}, {0.3, 0.3, 0.4}, 1000},
      {GameVariant::PayCooperators, PaymentPolicy::ess_cooperators(0.01), {0.05, 0.3, 0.65}, 1001},
      {GameVariant::PayCooperators, PaymentPolicy::fixed(0.7), {0.0, 0.001, 0.999}, 1000},
      {GameVariant::PayReputers, PaymentPolicy::ess_reputers(0.01), {0.01, 0.3, 0.69}, 999},
      {GameVariant::PayReputers, PaymentPolicy::fixed(0.4), {0.0, 0.5, 0.5}, 1000},
  };
  for (const auto& c : cases) {
    GameParams g = kRef;
    g.n = c.n;
    const Trajectory t = evolve(config_for(c.v, g, c.policy, c.init, 300, 3));
    REQUIRE_FALSE(t.records.empty());
    for (std::size_t k = 0; k < t.records.size(); ++k) {
      const RoundRecord& rec = t.records[k];
      CHECK(rec.round == static_cast<std::int64_t>(k));
      CHECK(rec.counts.total() == c.n);
      CHECK(rec.payment >= 0.0);
      const Budget& b = rec.budget;
      CHECK(std::abs(b.fees - b.redistributed - b.burned) <= 1e-9 * std::max(1.0, b.fees));
      if (rec.pool_burned) CHECK(b.burned == b.fees);
    }
    CHECK(t.final_counts.total() == c.n);
  }
}

TEST_CASE("empty reputation pool is burned") {
  GameParams g = kRef;
  g.n = 1000;
  auto cfg = config_for(GameVariant::PayReputers, g, PaymentPolicy::fixed(0.4), {0, 0.5, 0.5});
  Population pop = init_population(cfg);
  Rng rng(1);
  const RoundRecord rec = run_round(pop, cfg.variant, cfg.params, cfg.policy, rng);
  CHECK(rec.pool_burned);
  CHECK(rec.budget.fees == doctest::Approx(400.0));
  CHECK(rec.budget.redistributed == 0.0);
  CHECK(rec.realized.p_c + 0.4 == doctest::Approx(expected_payoffs(
                                        GameVariant::Baseline, g, rec.state).p_c).epsilon(0.2));
}

TEST_CASE("trajectories are deterministic") {
  const auto cfg = config_for(GameVariant::PayCooperators, kRef, PaymentPolicy::ess_cooperators(0.01),
                              {0.05, 0.3, 0.65}, 150, 17);
  const Trajectory a = evolve(cfg);
  const Trajectory b = evolve(cfg);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) CHECK(same_records(a.records[k], b.records[k]));
  auto other = cfg;
  other.seed = 18;
  const Trajectory c = evolve(other);
  bool differs = false;
  for (std::size_t k = 0; k < c.records.size(); ++k) {
    differs = differs || !(c.records[k].counts == a.records[k].counts);
  }
  CHECK(differs);
}

TEST_CASE("parallel ensemble equals the serial ensemble") {
  GameParams g = kRef;
  g.n = 2000;
  const auto cfg = config_for(GameVariant::PayReputers, g, PaymentPolicy::ess_reputers(0.01),
                              {0.4, 0.3, 0.3}, 100);
  const std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5};
  const auto serial = run_ensemble_serial(cfg, seeds);
  const auto parallel = run_ensemble(cfg, seeds);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t k = 0; k < serial.size(); ++k) {
    CHECK(serial[k].config.seed == seeds[k]);
    CHECK(serial[k].terminal == parallel[k].terminal);
    REQUIRE(serial[k].records.size() == parallel[k].records.size());
    for (std::size_t r = 0; r < serial[k].records.size(); ++r) {
      CHECK(same_records(serial[k].records[r], parallel[k].records[r]));
    }
  }
}

TEST_CASE("convergence stops at the window") {
  const auto cfg = config_for(GameVariant::Baseline, {4, 2.5, 2, 3, 0, 10000}, {}, {0.4, 0.4, 0.2},
                              20000, 0);
  const Trajectory t = evolve(cfg);
  CHECK(t.terminal == Terminal::kConverged);
  CHECK(t.final_state.x_d > 0.99);
  int tail = 0;
  for (auto it = t.records.rbegin(); it != t.records.rend(); ++it) {
    if (l1_distance(it->state, vertex(S::D)) > cfg.convergence_tol) break;
    ++tail;
  }
  CHECK(tail == kConvergenceWindow);
}

TEST_CASE("config validation") {
  auto cfg = config_for(GameVariant::Baseline, kRef, {}, {0.3, 0.3, 0.4});
  cfg.rounds_max = 0;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
  cfg.rounds_max = 10;
  cfg.mutation_rate = 1.0;
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
  cfg.mutation_rate = 0.0;
  cfg.init = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
}

TEST_CASE("replicator step") {
  const PaymentPolicy none = PaymentPolicy::fixed(0);
  SUBCASE("fixed point at the interior equilibrium") {
    const PopulationState next = replicator_step(kBaselineEq, GameVariant::Baseline, kRef, none, 1.0);
    CHECK(l1_distance(next, kBaselineEq) < 1e-9);
  }
  SUBCASE("vertices and faces are invariant") {
    for (S s : kStrategies) {
      for (auto v : {GameVariant::Baseline, GameVariant::PayCooperators}) {
        const PopulationState x = vertex(s);
        CHECK(replicator_step(x, v, kRef, PaymentPolicy::fixed(0.5), 1.0) == x);
      }
    }
    const PopulationState face = replicator_step({0.4, 0.0, 0.6}, GameVariant::Baseline, kRef, none, 1.0);
    CHECK(face.x_c == 0.0);
  }
  SUBCASE("direction follows the payoff advantage") {
    const PopulationState x{0.5, 0.3, 0.2};
    const ExpectedPayoffs pay = expected_payoffs(GameVariant::Baseline, kRef, x);
    const PopulationState next = replicator_step(x, GameVariant::Baseline, kRef, none, 0.5);
    for (S s : kStrategies) {
      const double dx = next[s] - x[s];
      const double adv = pay[s] - pay.p_bar;
      CHECK((dx > 0) == (adv > 0));
    }
  }
  SUBCASE("stays on the simplex") {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
      double r = u(gen), c = u(gen) * (1 - r);
      const PopulationState x{r, c, 1 - r - c};
      for (auto v : {GameVariant::Baseline, GameVariant::PayCooperators, GameVariant::PayReputers}) {
        const auto next = replicator_step(x, v, kRef, PaymentPolicy::ess_cooperators(0.01), 1.0);
        CHECK(std::abs(next.sum() - 1.0) < 1e-12);
      }
    }
    // Empty pools are burned rather than raising.
    CHECK_NOTHROW(replicator_step({0, 0.5, 0.5}, GameVariant::PayReputers, kRef,
                                  PaymentPolicy::fixed(1), 1.0));
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS(replicator_step(kBaselineEq, GameVariant::Baseline, kRef, none, 0.0));
    CHECK_THROWS(replicator_step({0.5, 0.5, 0.5}, GameVariant::Baseline, kRef, none, 1.0));
  }
}

TEST_CASE("stochastic rounds follow the replicator on average") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.1, 0.8);
  const PaymentPolicy none = PaymentPolicy::fixed(0);
  for (int k = 0; k < 10; ++k) {
    double r = u(gen), c = u(gen) * (1 - r);
    const PopulationState x0 = state_from_counts(counts_from_state({r, c, 1 - r - c}, kRef.n));
    const PopulationState target = replicator_step(x0, GameVariant::Baseline, kRef, none, 1.0);
    double mean[3] = {0, 0, 0};
    const auto cfg = config_for(GameVariant::Baseline, kRef, none, x0, 1, 100 + k);
    const Population start = init_population(cfg);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Population pop = start;
      Rng rng(seed * 1000 + static_cast<std::uint64_t>(k));
      run_round(pop, cfg.variant, cfg.params, cfg.policy, rng);
      const PopulationState x1 = pop.state();
      for (S s : kStrategies) mean[index(s)] += (x1[s] - x0[s]) / 200;
    }
    double dot = 0, n1 = 0, n2 = 0;
    for (S s : kStrategies) {
      const double e = target[s] - x0[s];
      dot += e * mean[index(s)];
      n1 += e * e;
      n2 += mean[index(s)] * mean[index(s)];
    }
    CAPTURE(k);
    CHECK(dot / std::sqrt(n1 * n2) > 0.9);
  }
}

TEST_CASE("no expected flow at the interior equilibrium") {
  const auto cfg = config_for(GameVariant::Baseline, kRef, {}, kBaselineEq, 1, 0);
  const Population start = init_population(cfg);
  const PopulationState x0 = start.state();
  constexpr int kSeeds = 200;
  double mean[3] = {0, 0, 0}, sq[3] = {0, 0, 0};
  for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
    Population pop = start;
    Rng rng(seed);
    run_round(pop, cfg.variant, cfg.params, cfg.policy, rng);
    for (S s : kStrategies) {
      const double dx = pop.state()[s] - x0[s];
      mean[index(s)] += dx / kSeeds;
      sq[index(s)] += dx * dx / kSeeds;
    }
  }
  for (S s : kStrategies) {
    const double se = std::sqrt((sq[index(s)] - mean[index(s)] * mean[index(s)]) / (kSeeds - 1));
    CHECK(std::abs(mean[index(s)]) <= 3 * se + 1e-12);
  }
}

// The interior equilibrium is an unstable node of the mean-field map, so
// sampling noise is amplified from round to round. Bound the 50-round
// displacement by propagating a binomial per-round variance through the
// spectral norm of the linearized replicator step.
double step_amplification(const PopulationState& x) {
  const PaymentPolicy none = PaymentPolicy::fixed(0);
  const double h = 1e-6;
  auto f = [&](double dr, double dc) {
    const PopulationState y{x.x_r + dr, x.x_c + dc, x.x_d - dr - dc};
    return replicator_step(y, GameVariant::Baseline, kRef, none, 1.0);
  };
  double j[2][2];
  const PopulationState pr = f(h, 0), mr = f(-h, 0), pc = f(0, h), mc = f(0, -h);
  j[0][0] = (pr.x_r - mr.x_r) / (2 * h);
  j[1][0] = (pr.x_c - mr.x_c) / (2 * h);
  j[0][1] = (pc.x_r - mc.x_r) / (2 * h);
  j[1][1] = (pc.x_c - mc.x_c) / (2 * h);
  // Largest singular value of the 2x2 Jacobian.
  const double a = j[0][0] * j[0][0] + j[1][0] * j[1][0];
  const double b = j[0][0] * j[0][1] + j[1][0] * j[1][1];
  const double c = j[0][1] * j[0][1] + j[1][1] * j[1][1];
  return std::sqrt((a + c) / 2 + std::sqrt((a - c) * (a - c) / 4 + b * b));
}

TEST_CASE("equilibrium composition drifts only by amplified sampling noise") {
  const auto cfg = config_for(GameVariant::Baseline, kRef, {}, kBaselineEq, 50, 0);
  const Population start = init_population(cfg);
  const PopulationState x0 = start.state();
  const double gain = step_amplification(kBaselineEq);
  CHECK(gain > 1.0);
  const double norm = imitation_normalizer(cfg.variant, cfg.params, cfg.policy);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Population pop = start;
    Rng rng(seed);
    double variance = 0;
    for (int r = 0; r < 50; ++r) {
      const RoundRecord rec = run_round(pop, cfg.variant, cfg.params, cfg.policy, rng);
      // Each agent switches with probability at most (largest realized gap) / normalizer;
      // every switch moves two components by 1/N.
      double lo = INFINITY, hi = -INFINITY;
      for (S s : kStrategies) {
        lo = std::min(lo, rec.realized[s]);
        hi = std::max(hi, rec.realized[s]);
      }
      variance = variance * gain * gain + 2 * (hi - lo) / norm / static_cast<double>(kRef.n);
    }
    const PopulationState x1 = pop.state();
    CAPTURE(seed);
    CHECK(l1_distance(x1, x0) <= 3 * std::sqrt(2 * variance));
  }
}

}  // namespace
}  // namespace repgame
