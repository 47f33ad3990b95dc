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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "repgame/equilibrium.hpp"

namespace repgame {
namespace {

using S = Strategy;

const GameParams kRef{8.0, 3.0, 2.0, 4.0, 0.0, 10000};
const PopulationCounts kHalfD{2500, 2500, 5000};

GameParams with_p(GameParams g, double p) {
  g.p = p;
  return g;
}

const MixedEquilibrium* find_label(const std::vector<MixedEquilibrium>& v, std::string_view label) {
  for (const auto& m : v) {
    if (m.label == label) return &m;
  }
  return nullptr;
}

const PureProfileResult& profile(const std::vector<PureProfileResult>& v, S s) {
  return *std::find_if(v.begin(), v.end(), [&](const auto& r) { return r.strategy == s; });
}

TEST_CASE("baseline pure profiles") {
  const auto pure = pure_nash(GameVariant::Baseline, kRef, {0, 0, 10000});
  REQUIRE(pure.size() == 3);
  CHECK(profile(pure, S::D).is_nash);
  CHECK(profile(pure, S::D).is_strict);
  CHECK(profile(pure, S::D).is_ess);
  CHECK_FALSE(profile(pure, S::R).is_nash);
  CHECK_FALSE(profile(pure, S::C).is_nash);
}

TEST_CASE("paying variants: pure profiles past the thresholds") {
  const auto c = pure_nash(GameVariant::PayCooperators, with_p(kRef, 2.0), kHalfD);
  CHECK(profile(c, S::C).is_nash);
  CHECK(profile(c, S::C).is_strict);
  CHECK(profile(c, S::C).is_ess);
  const auto r = pure_nash(GameVariant::PayReputers, with_p(kRef, 0.6), kHalfD);
  CHECK(profile(r, S::R).is_strict);
  CHECK(profile(r, S::R).is_ess);
}

TEST_CASE("ess_check") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double a = 0.5 + 4 * u(gen);
    const GameParams g{a + 0.1 + 5 * u(gen), a, a * u(gen), 5 * u(gen), 0.0, 10000};
    CHECK(ess_check(GameVariant::Baseline, g, kHalfD, S::D).is_ess);
    const auto r = ess_check(GameVariant::Baseline, g, kHalfD, S::R);
    CHECK_FALSE(r.is_ess);
    CHECK_FALSE(r.explanation.empty());
  }
  // Strictly between the two game-2 thresholds no pure strategy is an ESS.
  const GameParams mid = with_p(kRef, 1.2);
  CHECK_FALSE(ess_check(GameVariant::PayCooperators, mid, kHalfD, S::C).is_ess);
  CHECK_FALSE(ess_check(GameVariant::PayCooperators, mid, kHalfD, S::D).is_ess);
  // Second-order condition: u(s,s) == u(t,s) but u(s,t) > u(t,t).
  PayoffMatrix m;
  m.u = {{{1, 2, 2}, {1, 0, 0}, {0, 0, 0}}};
  CHECK(ess_check(m, S::R).is_ess);
  m.u[1][1] = 3;
  CHECK_FALSE(ess_check(m, S::R).is_ess);
}

TEST_CASE("closed-form mixed equilibria") {
  SUBCASE("baseline") {
    const auto all = mixed_closed_form(GameVariant::Baseline, kRef);
    const auto* full = find_label(all, "full");
    REQUIRE(full != nullptr);
    CHECK(full->valid);
    CHECK(full->support.full());
    CHECK(full->state.x_r == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(full->state.x_c == doctest::Approx(1.0 / 12).epsilon(1e-14));
    CHECK(full->state.x_d == doctest::Approx(2.0 / 3).epsilon(1e-15));
    const auto* rd = find_label(all, "RD-mix");
    REQUIRE(rd != nullptr);
    CHECK(rd->state.x_r == doctest::Approx(2.0 / 9));
    CHECK(rd->valid);  // 12 >= 9 / 1
  }
  SUBCASE("R/D mix fails once C can invade") {
    const GameParams g{4, 2.5, 2, 3, 0, 10000};  // d+beta = 7 < a^2/(a-alpha) = 12.5
    const auto* rd = find_label(mixed_candidates(GameVariant::Baseline, g), "RD-mix");
    REQUIRE(rd != nullptr);
    CHECK_FALSE(rd->valid);
  }
  SUBCASE("pay cooperators") {
    const auto all = mixed_candidates(GameVariant::PayCooperators, with_p(kRef, 0.5));
    const auto* full = find_label(all, "full");
    REQUIRE(full != nullptr);
    CHECK(full->valid);
    CHECK(full->state.x_d == doctest::Approx(2.0 / 3));
    CHECK(full->state.x_r == doctest::Approx(0.125));
    CHECK(full->state.x_c == doctest::Approx(1 - 2.0 / 3 - 0.125));
  }
  SUBCASE("pay reputers degenerates onto the boundary") {
    const auto all = mixed_candidates(GameVariant::PayReputers, with_p(kRef, 0.5));
    const auto* full = find_label(all, "full");
    REQUIRE(full != nullptr);
    CHECK(full->state.x_r == doctest::Approx(0.25));
    CHECK(std::abs(full->state.x_d) < 1e-12);
    CHECK_FALSE(full->valid);
  }
  SUBCASE("nothing inside the cube") {
    // Far past a - alpha every closed form of game 2 leaves [0,1]^3.
    bool any_inside = false;
    for (const auto& m : mixed_candidates(GameVariant::PayCooperators, with_p(kRef, 40.0))) {
      bool inside = true;
      for (S s : kStrategies) inside = inside && m.state[s] >= 0 && m.state[s] <= 1;
      any_inside = any_inside || inside;
    }
    if (!any_inside) {
      CHECK_THROWS_AS(mixed_closed_form(GameVariant::PayCooperators, with_p(kRef, 40.0)),
                      NoValidEquilibrium);
    }
  }
}

TEST_CASE("indifference at every valid closed form") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int k = 0; k < 300; ++k) {
    const double a = 0.5 + 4 * u(gen);
    GameParams g{a + 0.1 + 8 * u(gen), a, a * u(gen), 6 * u(gen), 2 * u(gen), 10000};
    for (auto v : {GameVariant::Baseline, GameVariant::PayCooperators, GameVariant::PayReputers}) {
      for (const auto& m : mixed_candidates(v, g)) {
        if (!m.valid) continue;
        const ExpectedPayoffs pay = expected_payoffs(v, g, m.state);
        double lo = INFINITY, hi = -INFINITY;
        for (S s : kStrategies) {
          if (!m.support.contains(s)) continue;
          lo = std::min(lo, pay[s]);
          hi = std::max(hi, pay[s]);
        }
        CHECK(hi - lo < 1e-9);
        for (S s : kStrategies) {
          if (!m.support.contains(s)) CHECK(pay[s] <= hi + 1e-9);
        }
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("support helpers") {
  CHECK(Support::of({S::R, S::D}).to_string() == "RD");
  CHECK(Support::inferred({0.5, 0.0, 0.5}) == Support::of({S::R, S::D}));
  CHECK(Support::inferred({0.5, 1e-7, 0.5}, 1e-6).size() == 2);
  CHECK(Support(7).full());
  CHECK(satisfies_equilibrium(GameVariant::Baseline, kRef, {0.25, 1.0 / 12, 2.0 / 3}, Support(7)));
  CHECK_FALSE(satisfies_equilibrium(GameVariant::Baseline, kRef, {0.3, 0.1, 0.6}, Support(7)));
}

TEST_CASE("oracle recovers the baseline equilibria") {
  const auto clusters = mixed_oracle(GameVariant::Baseline, kRef, 600);
  bool found_full = false, found_rd = false;
  for (const auto& c : clusters) {
    if (c.support.full()) {
      CHECK(l1_distance(c.state, {0.25, 1.0 / 12, 2.0 / 3}) <= 2.0 / 600);
      found_full = true;
    }
    if (c.support == Support::of({S::R, S::D})) {
      CHECK(l1_distance(c.state, {2.0 / 9, 0, 7.0 / 9}) <= 2.0 / 600);
      found_rd = true;
    }
  }
  CHECK(found_full);
  CHECK(found_rd);
  CHECK_THROWS_AS(mixed_oracle(GameVariant::Baseline, kRef, 10), std::invalid_argument);
}

TEST_CASE("oracle finds no interior point when reputation dominates") {
  const auto clusters = mixed_oracle(GameVariant::PayReputers, with_p(kRef, 3.0), 50);
  for (const auto& c : clusters) CHECK_FALSE(c.support.full());
}

TEST_CASE("regime classification") {
  const GameParams g = kRef;
  CHECK(regime(GameVariant::PayCooperators, with_p(g, 2.0), kHalfD).regime == Regime::C_ESS);
  CHECK(regime(GameVariant::PayCooperators, with_p(g, 0.5), kHalfD).regime == Regime::D_NASH);
  const auto mid = regime(GameVariant::PayCooperators, with_p(g, 1.2), kHalfD);
  CHECK(mid.regime == Regime::MIXED);
  REQUIRE(mid.thresholds.size() == 2);
  CHECK(mid.thresholds[0].value == doctest::Approx(1.5));
  CHECK(mid.thresholds[1].value == doctest::Approx(1.0));
  CHECK_FALSE(mid.mixed.empty());

  const auto edge = regime(GameVariant::PayCooperators, with_p(g, 1.5), kHalfD);
  CHECK(edge.regime == Regime::C_WEAK_NASH);
  const auto& pc = profile(edge.pure, S::C);
  CHECK(pc.is_nash);
  CHECK_FALSE(pc.is_strict);
  CHECK_FALSE(pc.is_ess);

  CHECK(regime(GameVariant::PayReputers, with_p(g, 0.6), kHalfD).regime == Regime::R_ESS);
  CHECK(regime(GameVariant::PayReputers, with_p(g, 0.4), kHalfD).regime == Regime::D_NASH);
  CHECK(regime(GameVariant::PayReputers, with_p(g, 0.5), kHalfD).regime == Regime::NONE);
  CHECK(regime(GameVariant::Baseline, g, kHalfD).regime == Regime::D_NASH);
  CHECK(to_string(Regime::C_WEAK_NASH) == "C_WEAK_NASH");
}

}  // namespace
}  // namespace repgame
