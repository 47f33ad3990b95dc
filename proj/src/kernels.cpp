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

#include "repgame/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace repgame::kernels {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ExpectedPayoffs payoffs_or_nan(GameVariant variant, const GameParams& params,
                               const PopulationState& x) {
  try {
    return expected_payoffs(variant, params, x);
  } catch (const DegeneratePool&) {
    return {kNaN, kNaN, kNaN, kNaN};
  }
}

bool finite(const ExpectedPayoffs& p) {
  return std::isfinite(p.p_r) && std::isfinite(p.p_c) && std::isfinite(p.p_d);
}

void fill_row(GameVariant variant, const GameParams& params, LatticePayoffs& lattice, int i) {
  for (int j = 0; i + j <= lattice.grid(); ++j) {
    lattice.at(i, j) = payoffs_or_nan(variant, params, lattice.point(i, j));
  }
}

double support_spread(const ExpectedPayoffs& pay, Support sup) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Strategy s : kStrategies) {
    if (!sup.contains(s)) continue;
    lo = std::min(lo, pay[s]);
    hi = std::max(hi, pay[s]);
  }
  return hi - lo;
}

// Exact payoffs at an interpolated root; nullopt if they cannot be evaluated.
std::optional<RootHit> make_hit(GameVariant variant, const GameParams& params,
                                const PopulationState& x, Support sup, double off_tol) {
  const ExpectedPayoffs pay = payoffs_or_nan(variant, params, x);
  if (!finite(pay)) return std::nullopt;
  double best = -std::numeric_limits<double>::infinity();
  for (Strategy s : kStrategies) {
    if (sup.contains(s)) best = std::max(best, pay[s]);
  }
  for (Strategy s : kStrategies) {
    if (!sup.contains(s) && pay[s] > best + off_tol) return std::nullopt;
  }
  return RootHit{x, sup, support_spread(pay, sup)};
}

// Linear zero of (P_R - P_C, P_C - P_D) over one lattice triangle.
void triangle_root(GameVariant variant, const GameParams& params, const LatticePayoffs& lat,
                   const std::array<std::pair<int, int>, 3>& v, std::vector<RootHit>& out) {
  double g1[3], g2[3];
  for (int k = 0; k < 3; ++k) {
    const ExpectedPayoffs& p = lat.at(v[k].first, v[k].second);
    if (!finite(p)) return;
    g1[k] = p.p_r - p.p_c;
    g2[k] = p.p_c - p.p_d;
  }
  const double a11 = g1[1] - g1[0], a12 = g1[2] - g1[0];
  const double a21 = g2[1] - g2[0], a22 = g2[2] - g2[0];
  const double det = a11 * a22 - a12 * a21;
  const double scale = std::max({std::abs(a11 * a22), std::abs(a12 * a21), 1e-300});
  if (std::abs(det) <= 1e-12 * scale) return;
  const double lb = (-g1[0] * a22 + g2[0] * a12) / det;
  const double lc = (-g2[0] * a11 + g1[0] * a21) / det;
  const double la = 1.0 - lb - lc;
  constexpr double kEdge = -1e-12;
  if (la < kEdge || lb < kEdge || lc < kEdge) return;
  PopulationState x{};
  const double w[3] = {la, lb, lc};
  for (int k = 0; k < 3; ++k) {
    const PopulationState q = lat.point(v[k].first, v[k].second);
    x.x_r += w[k] * q.x_r;
    x.x_c += w[k] * q.x_c;
  }
  x.x_d = 1.0 - x.x_r - x.x_c;
  if (!(x.x_r > 0.0 && x.x_c > 0.0 && x.x_d > 0.0)) return;  // boundary roots come from edges
  if (auto hit = make_hit(variant, params, x, Support(7), 0.0)) out.push_back(*hit);
}

void row_roots(GameVariant variant, const GameParams& params, const LatticePayoffs& lat, int i,
               std::vector<RootHit>& out) {
  const int grid = lat.grid();
  for (int j = 0; i + j < grid; ++j) {
    triangle_root(variant, params, lat, {{{i, j}, {i + 1, j}, {i, j + 1}}}, out);
    if (i + j + 2 <= grid) {
      triangle_root(variant, params, lat, {{{i + 1, j}, {i, j + 1}, {i + 1, j + 1}}}, out);
    }
  }
}

// Sign changes of P_s - P_t along one boundary edge, walking lattice points m = 0..grid.
template <typename Point>
void edge_roots(GameVariant variant, const GameParams& params, const LatticePayoffs& lat,
                Strategy s, Strategy t, Point point, double off_tol, std::vector<RootHit>& out) {
  const int grid = lat.grid();
  const Support sup = Support::of({s, t});
  auto diff = [&](int m) {
    const auto [i, j] = point(m);
    const ExpectedPayoffs& p = lat.at(i, j);
    return finite(p) ? p[s] - p[t] : kNaN;
  };
  for (int m = 0; m < grid; ++m) {
    const double g0 = diff(m), g1 = diff(m + 1);
    if (!std::isfinite(g0) || !std::isfinite(g1)) continue;
    double w;
    if (g0 == 0.0) {
      if (m == 0) continue;  // a vertex is not a mixed state
      w = 0.0;
    } else if (g0 * g1 < 0.0) {
      w = g0 / (g0 - g1);
    } else {
      continue;
    }
    const auto [i0, j0] = point(m);
    const auto [i1, j1] = point(m + 1);
    const PopulationState a = lat.point(i0, j0), b = lat.point(i1, j1);
    PopulationState x{a.x_r + w * (b.x_r - a.x_r), a.x_c + w * (b.x_c - a.x_c), 0.0};
    x.x_d = 1.0 - x.x_r - x.x_c;
    for (Strategy u : kStrategies) {
      if (!sup.contains(u)) x[u] = 0.0;
    }
    if (auto hit = make_hit(variant, params, x, sup, off_tol)) out.push_back(*hit);
  }
}

void boundary_roots(GameVariant variant, const GameParams& params, const LatticePayoffs& lat,
                    double off_tol, std::vector<RootHit>& out) {
  const int grid = lat.grid();
  using S = Strategy;
  edge_roots(variant, params, lat, S::R, S::D, [](int m) { return std::pair{m, 0}; }, off_tol, out);
  edge_roots(variant, params, lat, S::C, S::D, [](int m) { return std::pair{0, m}; }, off_tol, out);
  edge_roots(variant, params, lat, S::R, S::C, [grid](int m) { return std::pair{m, grid - m}; },
             off_tol, out);
}

}  // namespace

LatticePayoffs::LatticePayoffs(int grid)
    : grid_(grid),
      values_(static_cast<std::size_t>(grid + 1) * static_cast<std::size_t>(grid + 2) / 2) {}

PopulationState LatticePayoffs::point(int i, int j) const {
  const double inv = 1.0 / static_cast<double>(grid_);
  return {i * inv, j * inv, static_cast<double>(grid_ - i - j) * inv};
}

bool LatticePayoffs::operator==(const LatticePayoffs& other) const {
  if (grid_ != other.grid_ || values_.size() != other.values_.size()) return false;
  auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const auto& a = values_[k];
    const auto& b = other.values_[k];
    if (!same(a.p_r, b.p_r) || !same(a.p_c, b.p_c) || !same(a.p_d, b.p_d) ||
        !same(a.p_bar, b.p_bar)) {
      return false;
    }
  }
  return true;
}

LatticePayoffs evaluate_lattice_serial(GameVariant variant, const GameParams& params, int grid) {
  LatticePayoffs lattice(grid);
  for (int i = 0; i <= grid; ++i) fill_row(variant, params, lattice, i);
  return lattice;
}

LatticePayoffs evaluate_lattice_parallel(GameVariant variant, const GameParams& params, int grid) {
  LatticePayoffs lattice(grid);
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i <= grid; ++i) fill_row(variant, params, lattice, i);
  return lattice;
}

std::vector<RootHit> find_roots_serial(GameVariant variant, const GameParams& params,
                                       const LatticePayoffs& lattice, double off_tol) {
  std::vector<RootHit> hits;
  for (int i = 0; i < lattice.grid(); ++i) row_roots(variant, params, lattice, i, hits);
  boundary_roots(variant, params, lattice, off_tol, hits);
  return hits;
}

std::vector<RootHit> find_roots_parallel(GameVariant variant, const GameParams& params,
                                         const LatticePayoffs& lattice, double off_tol) {
  const int grid = lattice.grid();
  std::vector<std::vector<RootHit>> rows(static_cast<std::size_t>(grid) + 1);
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < grid; ++i) row_roots(variant, params, lattice, i, rows[static_cast<std::size_t>(i)]);
  boundary_roots(variant, params, lattice, off_tol, rows.back());
  std::vector<RootHit> hits;
  for (auto& row : rows) hits.insert(hits.end(), row.begin(), row.end());
  return hits;
}

PairTally tally_pairs_serial(std::span<const Strategy> strategies,
                             std::span<const std::int32_t> order) {
  PairTally tally{};
  const std::size_t pairs = order.size() / 2;
  for (std::size_t k = 0; k < pairs; ++k) {
    const int s = index(strategies[static_cast<std::size_t>(order[2 * k])]);
    const int t = index(strategies[static_cast<std::size_t>(order[2 * k + 1])]);
    ++tally[s][t];
    ++tally[t][s];
  }
  return tally;
}

PairTally tally_pairs_parallel(std::span<const Strategy> strategies,
                               std::span<const std::int32_t> order) {
  const auto pairs = static_cast<std::int64_t>(order.size() / 2);
  // Integer reduction: result is independent of the thread count.
  std::int64_t flat[9] = {0, 0, 0, 0, 0, 0, 0, 0, 0};
#pragma omp parallel for reduction(+ : flat[:9]) schedule(static)
  for (std::int64_t k = 0; k < pairs; ++k) {
    const int s = index(strategies[static_cast<std::size_t>(order[2 * k])]);
    const int t = index(strategies[static_cast<std::size_t>(order[2 * k + 1])]);
    flat[s * 3 + t] += 1;
    flat[t * 3 + s] += 1;
  }
  PairTally tally{};
  for (int s = 0; s < 3; ++s) {
    for (int t = 0; t < 3; ++t) tally[s][t] = flat[s * 3 + t];
  }
  return tally;
}

void assign_payoffs_serial(std::span<const Strategy> strategies,
                           std::span<const std::int32_t> order, const PayoffMatrix& matrix,
                           std::span<double> payoffs) {
  const std::size_t pairs = order.size() / 2;
  for (std::size_t k = 0; k < pairs; ++k) {
    const auto i = static_cast<std::size_t>(order[2 * k]);
    const auto j = static_cast<std::size_t>(order[2 * k + 1]);
    payoffs[i] = matrix(strategies[i], strategies[j]);
    payoffs[j] = matrix(strategies[j], strategies[i]);
  }
}

void assign_payoffs_parallel(std::span<const Strategy> strategies,
                             std::span<const std::int32_t> order, const PayoffMatrix& matrix,
                             std::span<double> payoffs) {
  const auto pairs = static_cast<std::int64_t>(order.size() / 2);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < pairs; ++k) {
    const auto i = static_cast<std::size_t>(order[2 * k]);
    const auto j = static_cast<std::size_t>(order[2 * k + 1]);
    payoffs[i] = matrix(strategies[i], strategies[j]);
    payoffs[j] = matrix(strategies[j], strategies[i]);
  }
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace repgame::kernels
