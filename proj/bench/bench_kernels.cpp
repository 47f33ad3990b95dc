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

// Serial reference vs OpenMP kernels. Prints one line per kernel with the
// best-of-N wall time of each version and whether their outputs agree.
//   bench_kernels [repetitions]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <random>
#include <vector>

#include "repgame/dynamics.hpp"
#include "repgame/kernels.hpp"

namespace {

using namespace repgame;
using Clock = std::chrono::steady_clock;

template <typename F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return best;
}

void line(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  %s\n", name, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("threads: %d, repetitions: %d\n", kernels::max_threads(), reps);

  const GameParams g{8, 3, 2, 4, 1.2, 10000};
  {
    kernels::LatticePayoffs a, b;
    const double ts = best_of(reps, [&] {
      a = kernels::evaluate_lattice_serial(GameVariant::PayCooperators, g, 1200);
    });
    const double tp = best_of(reps, [&] {
      b = kernels::evaluate_lattice_parallel(GameVariant::PayCooperators, g, 1200);
    });
    line("lattice payoffs (1200)", ts, tp, a == b);

    std::vector<kernels::RootHit> ra, rb;
    const double rs = best_of(reps, [&] {
      ra = kernels::find_roots_serial(GameVariant::PayCooperators, g, a, 1.0 / 1200);
    });
    const double rp = best_of(reps, [&] {
      rb = kernels::find_roots_parallel(GameVariant::PayCooperators, g, b, 1.0 / 1200);
    });
    line("root search (1200)", rs, rp, ra == rb);
  }

  {
    const std::size_t n = 4'000'000;
    std::mt19937_64 gen(1);
    std::vector<Strategy> strategies(n);
    for (auto& s : strategies) s = kStrategies[gen() % 3];
    std::vector<std::int32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), gen);

    kernels::PairTally a{}, b{};
    const double ts = best_of(reps, [&] { a = kernels::tally_pairs_serial(strategies, order); });
    const double tp = best_of(reps, [&] { b = kernels::tally_pairs_parallel(strategies, order); });
    line("pair tally (4M)", ts, tp, a == b);

    const PayoffMatrix m = payoff_matrix(GameVariant::Baseline, g, PopulationCounts{0, 0, 10000});
    std::vector<double> pa(n), pb(n);
    const double ss = best_of(reps, [&] { kernels::assign_payoffs_serial(strategies, order, m, pa); });
    const double sp = best_of(reps, [&] { kernels::assign_payoffs_parallel(strategies, order, m, pb); });
    line("payoff assign (4M)", ss, sp, pa == pb);
  }

  {
    EvolveConfig c;
    c.variant = GameVariant::PayReputers;
    c.params = {8, 2.5, 2, 4, 0, 10000};
    c.policy = PaymentPolicy::ess_reputers(0.01);
    c.init = {0.4, 0.3, 0.3};
    c.rounds_max = 500;
    const std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7};
    std::vector<Trajectory> a, b;
    const double ts = best_of(1, [&] { a = run_ensemble_serial(c, seeds); });
    const double tp = best_of(1, [&] { b = run_ensemble(c, seeds); });
    bool same = a.size() == b.size();
    for (std::size_t k = 0; same && k < a.size(); ++k) {
      same = a[k].final_counts == b[k].final_counts && a[k].records.size() == b[k].records.size();
    }
    line("ensemble (8 seeds)", ts, tp, same);
  }
  return 0;
}
