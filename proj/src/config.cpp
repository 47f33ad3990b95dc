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

#include "repgame/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace repgame {

namespace {

constexpr std::string_view kKeys[] = {
    "game",   "d",        "a",          "alpha",      "beta",     "payment",
    "n",      "rounds_max", "seed",     "init_r",     "init_c",   "init_d",
    "mutation", "tol",    "sweep_param", "sweep_from", "sweep_to", "sweep_steps",
};

bool known_key(std::string_view key) {
  for (auto k : kKeys) {
    if (k == key) return true;
  }
  return false;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

double parse_double(const Entry& e, std::string_view key) {
  double v = 0.0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ParseError(e.line, "'" + std::string(key) + "' expects a finite number, got '" +
                                 e.value + "'");
  }
  return v;
}

template <typename Int>
Int parse_integer(const Entry& e, std::string_view key) {
  Int v = 0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(e.line, "'" + std::string(key) + "' expects an integer, got '" +
                                 e.value + "'");
  }
  return v;
}

PaymentPolicy parse_payment(const Entry& e) {
  const auto colon = e.value.find(':');
  if (colon == std::string::npos) {
    throw ParseError(e.line, "payment expects fixed:<p>, ess-coop:<eps> or ess-rep:<eps>");
  }
  const std::string kind = e.value.substr(0, colon);
  const Entry number{e.value.substr(colon + 1), e.line};
  const double v = parse_double(number, "payment");
  if (kind == "fixed") return PaymentPolicy::fixed(v);
  if (kind == "ess-coop") return PaymentPolicy::ess_cooperators(v);
  if (kind == "ess-rep") return PaymentPolicy::ess_reputers(v);
  throw ParseError(e.line, "unknown payment kind '" + kind + "'");
}

SweepParam parse_sweep_param(const Entry& e) {
  if (e.value == "d") return SweepParam::d;
  if (e.value == "a") return SweepParam::a;
  if (e.value == "alpha") return SweepParam::alpha;
  if (e.value == "beta") return SweepParam::beta;
  if (e.value == "p") return SweepParam::p;
  throw ParseError(e.line, "sweep_param must be one of d|a|alpha|beta|p, got '" + e.value + "'");
}

void validate(const RunConfig& c) {
  const GameParams& g = c.params;
  if (!(g.d > g.a)) throw ValidationError("d", "d>a violated");
  if (!(g.a > g.alpha)) throw ValidationError("a", "a>alpha violated");
  if (g.alpha < 0.0) throw ValidationError("alpha", "alpha>=0 violated");
  if (g.beta < 0.0) throw ValidationError("beta", "beta>=0 violated");
  if (g.n < 2) throw ValidationError("n", "n>=2 violated");
  if (g.n > (std::int64_t{1} << 31) - 1) throw ValidationError("n", "n too large");
  if (c.payment.kind == PaymentPolicy::Kind::kFixed ? c.payment.value < 0.0
                                                    : !(c.payment.value > 0.0)) {
    throw ValidationError("payment", "fixed payment must be >= 0, epsilon must be > 0");
  }
  if (c.rounds_max < 1) throw ValidationError("rounds_max", "must be >= 1");
  if (!(c.mutation >= 0.0 && c.mutation < 1.0)) {
    throw ValidationError("mutation", "must lie in [0, 1)");
  }
  if (!(c.tol > 0.0)) throw ValidationError("tol", "must be > 0");
  if (c.sweep) {
    if (c.sweep->steps < 1) throw ValidationError("sweep_steps", "must be >= 1");
    if (c.game != GameVariant::Baseline && c.sweep->param != SweepParam::p &&
        c.payment.kind != PaymentPolicy::Kind::kFixed) {
      throw ValidationError("payment", "sweeps of a paying game need a fixed payment");
    }
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(SweepParam p) {
  switch (p) {
    case SweepParam::d: return "d";
    case SweepParam::a: return "a";
    case SweepParam::alpha: return "alpha";
    case SweepParam::beta: return "beta";
    case SweepParam::p: return "p";
  }
  return "?";
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Entry, std::less<>> entries;
  int line_no = 0;
  while (!text.empty() || line_no == 0) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, "expected key=value, got '" + std::string(line) + "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!known_key(key)) throw ParseError(line_no, "unknown key '" + key + "'");
    if (value.empty()) throw ParseError(line_no, "empty value for '" + key + "'");
    if (entries.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
    entries.emplace(key, Entry{value, line_no});
  }

  // Syntax of every value first, so a malformed line is reported as such even
  // when required keys are also missing.
  for (const auto& [key, e] : entries) {
    if (key == "game" || key == "n" || key == "rounds_max" || key == "sweep_steps") {
      parse_integer<std::int64_t>(e, key);
    } else if (key == "seed") {
      parse_integer<std::uint64_t>(e, key);
    } else if (key == "payment") {
      parse_payment(e);
    } else if (key == "sweep_param") {
      parse_sweep_param(e);
    } else {
      parse_double(e, key);
    }
  }

  auto find = [&](std::string_view key) -> const Entry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto require = [&](std::string_view key) -> const Entry& {
    const Entry* e = find(key);
    if (e == nullptr) throw ValidationError(std::string(key), "required key missing");
    return *e;
  };

  RunConfig c;
  {
    const Entry& e = require("game");
    const auto v = variant_from_number(parse_integer<int>(e, "game"));
    if (!v) throw ValidationError("game", "must be 1, 2 or 3");
    c.game = *v;
  }
  c.params.d = parse_double(require("d"), "d");
  c.params.a = parse_double(require("a"), "a");
  c.params.alpha = parse_double(require("alpha"), "alpha");
  c.params.beta = parse_double(require("beta"), "beta");
  c.params.n = parse_integer<std::int64_t>(require("n"), "n");
  c.payment = parse_payment(require("payment"));
  if (const Entry* e = find("rounds_max")) {
    c.rounds_max = parse_integer<std::int64_t>(*e, "rounds_max");
  }
  if (const Entry* e = find("seed")) c.seed = parse_integer<std::uint64_t>(*e, "seed");
  if (const Entry* e = find("mutation")) c.mutation = parse_double(*e, "mutation");
  if (const Entry* e = find("tol")) c.tol = parse_double(*e, "tol");

  const Entry* ir = find("init_r");
  const Entry* ic = find("init_c");
  const Entry* id = find("init_d");
  if (ir || ic || id) {
    PopulationState s{parse_double(require("init_r"), "init_r"),
                      parse_double(require("init_c"), "init_c"),
                      parse_double(require("init_d"), "init_d")};
    constexpr const char* names[] = {"init_r", "init_c", "init_d"};
    for (Strategy k : kStrategies) {
      if (!(s[k] >= 0.0 && s[k] <= 1.0)) {
        throw ValidationError(names[index(k)], "must lie in [0, 1]");
      }
    }
    const double sum = s.sum();
    if (std::abs(sum - 1.0) > 1e-6) {
      throw ValidationError("init_r", "init_r + init_c + init_d must equal 1 within 1e-6");
    }
    if (std::abs(sum - 1.0) > 1e-12) s = {s.x_r / sum, s.x_c / sum, s.x_d / sum};
    c.init = s;
  }

  const Entry* sp = find("sweep_param");
  if (sp || find("sweep_from") || find("sweep_to") || find("sweep_steps")) {
    SweepSpec sw;
    sw.param = parse_sweep_param(require("sweep_param"));
    sw.from = parse_double(require("sweep_from"), "sweep_from");
    sw.to = parse_double(require("sweep_to"), "sweep_to");
    sw.steps = parse_integer<std::int64_t>(require("sweep_steps"), "sweep_steps");
    c.sweep = sw;
  }

  validate(c);
  return c;
}

std::string serialize(const RunConfig& c) {
  std::string out;
  auto put = [&](std::string_view key, const std::string& value) {
    out.append(key).append("=").append(value).append("\n");
  };
  put("game", std::to_string(static_cast<int>(c.game)));
  put("d", format_double(c.params.d));
  put("a", format_double(c.params.a));
  put("alpha", format_double(c.params.alpha));
  put("beta", format_double(c.params.beta));
  const char* kind = c.payment.kind == PaymentPolicy::Kind::kFixed          ? "fixed:"
                     : c.payment.kind == PaymentPolicy::Kind::kEssCooperators ? "ess-coop:"
                                                                             : "ess-rep:";
  put("payment", kind + format_double(c.payment.value));
  put("n", std::to_string(c.params.n));
  put("rounds_max", std::to_string(c.rounds_max));
  put("seed", std::to_string(c.seed));
  put("mutation", format_double(c.mutation));
  put("tol", format_double(c.tol));
  if (c.init) {
    put("init_r", format_double(c.init->x_r));
    put("init_c", format_double(c.init->x_c));
    put("init_d", format_double(c.init->x_d));
  }
  if (c.sweep) {
    put("sweep_param", std::string(to_string(c.sweep->param)));
    put("sweep_from", format_double(c.sweep->from));
    put("sweep_to", format_double(c.sweep->to));
    put("sweep_steps", std::to_string(c.sweep->steps));
  }
  return out;
}

double sweep_value(const SweepSpec& sweep, std::int64_t k) {
  if (sweep.steps <= 1) return sweep.from;
  if (k == sweep.steps - 1) return sweep.to;
  return sweep.from +
         (sweep.to - sweep.from) * static_cast<double>(k) / static_cast<double>(sweep.steps - 1);
}

PopulationState initial_state(const RunConfig& config) {
  return config.init.value_or(PopulationState{1.0 / 3, 1.0 / 3, 1.0 / 3});
}

EvolveConfig to_evolve_config(const RunConfig& config) {
  EvolveConfig e;
  e.variant = config.game;
  e.params = config.params;
  e.policy = config.payment;
  e.init = initial_state(config);
  e.rounds_max = config.rounds_max;
  e.mutation_rate = config.mutation;
  e.convergence_tol = config.tol;
  e.seed = config.seed;
  return e;
}

}  // namespace repgame
