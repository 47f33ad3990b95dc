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

#include "repgame/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>

#include "repgame/kernels.hpp"

namespace repgame {

namespace {

constexpr double kPayoffTol = 1e-9;
constexpr double kPositive = 1e-12;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

bool close_to(double value, double threshold) {
  return std::abs(value - threshold) <= 1e-12 * std::max(1.0, std::abs(threshold));
}

bool in_unit_cube(const PopulationState& s) {
  for (Strategy t : kStrategies) {
    if (!(s[t] >= 0.0 && s[t] <= 1.0)) return false;
  }
  return true;
}

MixedEquilibrium make_candidate(GameVariant variant, const GameParams& params,
                                std::string label, PopulationState state, Support support,
                                std::string condition) {
  MixedEquilibrium eq;
  eq.label = std::move(label);
  eq.state = state;
  eq.support = support;
  eq.valid = satisfies_equilibrium(variant, params, state, support);
  if (eq.valid) {
    eq.validity_note = std::move(condition);
  } else if (!in_unit_cube(state)) {
    eq.validity_note = "component outside [0,1]; " + condition;
  } else {
    eq.validity_note = "fails equilibrium conditions; " + condition;
  }
  return eq;
}

// Roots of (d-a+beta) x^2 - alpha x + p = 0: the R/D edge where x_d = 1 - x_r is
// substituted into the recipient count.
std::vector<double> rd_edge_roots(const GameParams& params) {
  const double k = params.d - params.a + params.beta;
  const double disc = params.alpha * params.alpha - 4.0 * k * params.p;
  if (disc < 0.0) return {};
  const double root = std::sqrt(disc);
  if (root == 0.0) return {params.alpha / (2.0 * k)};
  return {(params.alpha - root) / (2.0 * k), (params.alpha + root) / (2.0 * k)};
}

void append_rd_edge(GameVariant variant, const GameParams& params,
                    std::vector<MixedEquilibrium>& out) {
  const auto roots = rd_edge_roots(params);
  const std::string note =
      "negative payoff (common payoff -p), not designer-useful; requires P_C <= -p";
  if (roots.empty()) {
    out.push_back(make_candidate(variant, params, "RD-mix", {kNaN, 0.0, kNaN},
                                 Support::of({Strategy::R, Strategy::D}),
                                 "no real self-consistent solution; " + note));
    return;
  }
  for (double x_r : roots) {
    out.push_back(make_candidate(variant, params, "RD-mix", {x_r, 0.0, 1.0 - x_r},
                                 Support::of({Strategy::R, Strategy::D}), note));
  }
}

}  // namespace

Support Support::inferred(const PopulationState& state, double eps) {
  std::uint8_t bits = 0;
  for (Strategy s : kStrategies) {
    if (state[s] > eps) bits |= static_cast<std::uint8_t>(1u << index(s));
  }
  return Support(bits);
}

std::string Support::to_string() const {
  std::string out;
  for (Strategy s : kStrategies) {
    if (contains(s)) out.push_back(to_char(s));
  }
  return out;
}

EssVerdict ess_check(const PayoffMatrix& m, Strategy s, double tol) {
  EssVerdict verdict{true, {}};
  std::string detail;
  for (Strategy t : kStrategies) {
    if (t == s) continue;
    const double own = m(s, s);
    const double invader = m(t, s);
    std::string cmp = std::string("u(") + to_char(s) + "," + to_char(s) + ")=" + fmt(own);
    if (own > invader + tol) {
      detail += cmp + " > u(" + to_char(t) + "," + to_char(s) + ")=" + fmt(invader) + "; ";
      continue;
    }
    if (std::abs(own - invader) <= tol && m(s, t) > m(t, t) + tol) {
      detail += cmp + " = u(" + to_char(t) + "," + to_char(s) + ") and u(" + to_char(s) +
                "," + to_char(t) + ")=" + fmt(m(s, t)) + " > u(" + to_char(t) + "," +
                to_char(t) + ")=" + fmt(m(t, t)) + "; ";
      continue;
    }
    verdict.is_ess = false;
    detail += std::string("invaded by ") + to_char(t) + ": u(" + to_char(t) + "," +
              to_char(s) + ")=" + fmt(invader) + " vs " + cmp + "; ";
  }
  if (!detail.empty()) detail.resize(detail.size() - 2);
  verdict.explanation = std::move(detail);
  return verdict;
}

EssVerdict ess_check(GameVariant variant, const GameParams& params,
                     const PopulationCounts& counts, Strategy s) {
  return ess_check(payoff_matrix(variant, params, counts), s);
}

std::vector<PureProfileResult> pure_nash(GameVariant variant, const GameParams& params,
                                         const PopulationCounts& counts) {
  const PayoffMatrix m = payoff_matrix(variant, params, counts);
  std::vector<PureProfileResult> out;
  for (Strategy s : kStrategies) {
    PureProfileResult r;
    r.strategy = s;
    r.is_nash = true;
    r.is_strict = true;
    for (Strategy t : kStrategies) {
      if (t == s) continue;
      if (m(t, s) > m(s, s) + kPayoffTol) r.is_nash = false;
      if (!(m(t, s) < m(s, s) - kPayoffTol)) r.is_strict = false;
    }
    r.is_ess = ess_check(m, s).is_ess;
    out.push_back(r);
  }
  return out;
}

bool satisfies_equilibrium(GameVariant variant, const GameParams& params,
                           const PopulationState& state, Support support, double tol) {
  if (!state.on_simplex(1e-9)) return false;
  for (Strategy s : kStrategies) {
    const bool positive = state[s] > kPositive;
    if (support.contains(s) != positive) return false;
  }
  ExpectedPayoffs pay;
  try {
    pay = expected_payoffs(variant, params, state);
  } catch (const DegeneratePool&) {
    return false;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Strategy s : kStrategies) {
    if (!support.contains(s)) continue;
    lo = std::min(lo, pay[s]);
    hi = std::max(hi, pay[s]);
  }
  if (!(hi - lo <= tol)) return false;
  for (Strategy s : kStrategies) {
    if (!support.contains(s) && pay[s] > hi + tol) return false;
  }
  return true;
}

MixedEquilibrium full_support_candidate(GameVariant variant, const GameParams& params) {
  const Support all = Support::of({Strategy::R, Strategy::C, Strategy::D});
  const double d = params.d, a = params.a, alpha = params.alpha, beta = params.beta,
               p = params.p;
  PopulationState s;
  std::string note;
  switch (variant) {
    case GameVariant::Baseline:
      s.x_r = a / (d + beta);
      s.x_d = alpha / a;
      note = "requires x_c > 0, i.e. (d+beta)(a-alpha) > a^2";
      break;
    case GameVariant::PayCooperators:
      // x_d = alpha/a, so N/(N - n_d) = a/(a - alpha).
      s.x_d = alpha / a;
      s.x_r = (a - p * a / (a - alpha)) / (d + beta);
      note = "requires x_r > 0, i.e. p < a(1 - x_d) = a - alpha, and x_c > 0";
      break;
    case GameVariant::PayReputers:
      // x_r = a/(d+beta), so N/n_r = (d+beta)/a.
      s.x_r = a / (d + beta);
      s.x_d = (alpha - p * (d + beta) / a) / a;
      note = "requires x_d > 0, i.e. p < alpha*a/(d+beta), and x_c > 0";
      break;
  }
  s.x_c = 1.0 - s.x_r - s.x_d;
  return make_candidate(variant, params, "full", s, all, note);
}

std::vector<MixedEquilibrium> mixed_candidates(GameVariant variant, const GameParams& params) {
  std::vector<MixedEquilibrium> out;
  out.push_back(full_support_candidate(variant, params));
  const double d = params.d, a = params.a, alpha = params.alpha, beta = params.beta,
               p = params.p;
  switch (variant) {
    case GameVariant::Baseline: {
      const double x_r = alpha / (d - a + beta);
      out.push_back(make_candidate(
          variant, params, "RD-mix", {x_r, 0.0, 1.0 - x_r},
          Support::of({Strategy::R, Strategy::D}),
          "zero payoff; requires P_C <= 0, i.e. (d+beta) >= a^2/(a-alpha)"));
      break;
    }
    case GameVariant::PayCooperators: {
      append_rd_edge(variant, params, out);
      // C/D edge: C and D tie when p = a(1 - x_d); R stays out while x_d <= alpha/a.
      const double x_c = p / a;
      out.push_back(make_candidate(variant, params, "CD-drift", {0.0, x_c, 1.0 - x_c},
                                   Support::of({Strategy::C, Strategy::D}),
                                   "weak C/D drift at p = a(1-x_d); requires x_d <= alpha/a"));
      break;
    }
    case GameVariant::PayReputers: {
      append_rd_edge(variant, params, out);
      // R/C edge: R and C tie when p = x_r * alpha; D stays out while x_r >= a/(d+beta).
      const double x_r = alpha > 0.0 ? p / alpha : kNaN;
      out.push_back(make_candidate(variant, params, "RC-drift", {x_r, 1.0 - x_r, 0.0},
                                   Support::of({Strategy::R, Strategy::C}),
                                   "weak R/C drift at p = n_r*alpha/N; requires x_r >= a/(d+beta)"));
      break;
    }
  }
  return out;
}

std::vector<MixedEquilibrium> mixed_closed_form(GameVariant variant, const GameParams& params) {
  auto out = mixed_candidates(variant, params);
  const bool any_in_range = std::any_of(out.begin(), out.end(), [](const MixedEquilibrium& e) {
    return in_unit_cube(e.state);
  });
  if (!any_in_range) {
    throw NoValidEquilibrium("every closed-form candidate has a component outside [0,1]");
  }
  return out;
}

std::vector<OracleCluster> mixed_oracle(GameVariant variant, const GameParams& params,
                                        int grid) {
  if (grid < kMinOracleGrid) throw std::invalid_argument("oracle grid must be >= 50");
  const auto lattice = kernels::evaluate_lattice_parallel(variant, params, grid);
  const auto hits = kernels::find_roots_parallel(variant, params, lattice, 1.0 / grid);

  // A root on a shared cell edge shows up once per adjacent cell; join roots
  // with the same support that lie within one lattice step of each other.
  const double join = 2.0 / grid;
  std::vector<std::size_t> parent(hits.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t h = 0; h < hits.size(); ++h) {
    for (std::size_t k = h + 1; k < hits.size(); ++k) {
      if (hits[k].support == hits[h].support &&
          l1_distance(hits[k].state, hits[h].state) <= join) {
        parent[find(k)] = find(h);
      }
    }
  }

  std::vector<OracleCluster> out;
  std::map<std::size_t, std::size_t> slot;  // union-find root -> index in out
  for (std::size_t h = 0; h < hits.size(); ++h) {
    auto [it, fresh] = slot.try_emplace(find(h), out.size());
    if (fresh) {
      OracleCluster c;
      c.support = hits[h].support;
      c.best_spread = hits[h].residual;
      out.push_back(c);
    }
    OracleCluster& c = out[it->second];
    c.state.x_r += hits[h].state.x_r;
    c.state.x_c += hits[h].state.x_c;
    c.state.x_d += hits[h].state.x_d;
    c.best_spread = std::min(c.best_spread, hits[h].residual);
    ++c.members;
  }
  for (auto& c : out) {
    const auto m = static_cast<double>(c.members);
    c.state = {c.state.x_r / m, c.state.x_c / m, c.state.x_d / m};
  }
  return out;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::C_ESS: return "C_ESS";
    case Regime::C_WEAK_NASH: return "C_WEAK_NASH";
    case Regime::D_NASH: return "D_NASH";
    case Regime::MIXED: return "MIXED";
    case Regime::R_ESS: return "R_ESS";
    case Regime::NONE: return "NONE";
  }
  return "NONE";
}

RegimeReport regime(GameVariant variant, const GameParams& params,
                    const PopulationCounts& counts) {
  RegimeReport report;
  report.variant = variant;
  report.params = params;
  report.counts = counts;
  report.pure = pure_nash(variant, params, counts);

  const double big_n = static_cast<double>(params.n);
  const double p = params.p;
  switch (variant) {
    case GameVariant::Baseline: {
      report.regime = Regime::D_NASH;
      report.triggered_condition = "U(D,D)=0 >= U(R,D)=" + fmt(-params.alpha) +
                                   " and U(C,D)=" + fmt(-params.a) +
                                   (params.alpha > 0.0 ? " (strict)" : " (weak in R)");
      report.mixed = mixed_candidates(variant, params);
      break;
    }
    case GameVariant::PayCooperators: {
      const double share = 1.0 - static_cast<double>(counts.n_d) / big_n;
      const double ess = params.a * share;
      const double defect = params.alpha * share;
      report.thresholds = {{"a(1-n_d/N)", ess}, {"alpha(1-n_d/N)", defect}};
      report.drift_bound = "x_d < alpha/a";
      report.drift_bound_value = params.alpha / params.a;
      if (close_to(p, ess)) {
        report.regime = Regime::C_WEAK_NASH;
        report.triggered_condition = "p = a(1-n_d/N) = " + fmt(ess) +
                                     ": (C,C) weak Nash, C/D drift while x_d < alpha/a";
      } else if (p > ess) {
        report.regime = Regime::C_ESS;
        report.triggered_condition = "p = " + fmt(p) + " > a(1-n_d/N) = " + fmt(ess);
      } else if (p < defect && !close_to(p, defect)) {
        report.regime = Regime::D_NASH;
        report.triggered_condition = "p = " + fmt(p) + " < alpha(1-n_d/N) = " + fmt(defect);
      } else {
        report.regime = Regime::MIXED;
        report.triggered_condition = "alpha(1-n_d/N) = " + fmt(defect) + " <= p = " + fmt(p) +
                                     " < a(1-n_d/N) = " + fmt(ess);
        report.mixed = mixed_candidates(variant, params);
      }
      break;
    }
    case GameVariant::PayReputers: {
      const double bound = static_cast<double>(counts.n_r) * params.alpha / big_n;
      report.thresholds = {{"n_r*alpha/N", bound}};
      report.drift_bound = "x_r > a/(d+beta)";
      report.drift_bound_value = params.a / (params.d + params.beta);
      if (close_to(p, bound)) {
        report.regime = Regime::NONE;
        report.triggered_condition = "p = n_r*alpha/N = " + fmt(bound) +
                                     ": (R,R) and (D,D) weak, R/C drift while x_r > a/(d+beta)";
        report.mixed = mixed_candidates(variant, params);
      } else if (p > bound) {
        report.regime = Regime::R_ESS;
        report.triggered_condition = "p = " + fmt(p) + " > n_r*alpha/N = " + fmt(bound);
      } else {
        report.regime = Regime::D_NASH;
        report.triggered_condition = "p = " + fmt(p) + " < n_r*alpha/N = " + fmt(bound);
      }
      break;
    }
  }
  return report;
}

}  // namespace repgame
