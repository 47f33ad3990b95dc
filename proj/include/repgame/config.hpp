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

#ifndef REPGAME_CONFIG_HPP_
#define REPGAME_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "repgame/dynamics.hpp"
#include "repgame/game.hpp"

namespace repgame {

// Malformed input: bad syntax, unknown or repeated key, unparsable value.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Well-formed input whose values break an invariant.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class SweepParam { d, a, alpha, beta, p };

std::string_view to_string(SweepParam p);

struct SweepSpec {
  SweepParam param = SweepParam::d;
  double from = 0.0;
  double to = 0.0;
  std::int64_t steps = 0;

  bool operator==(const SweepSpec&) const = default;
};

struct RunConfig {
  GameVariant game = GameVariant::Baseline;
  GameParams params;  // params.p unused; the payment policy decides p
  PaymentPolicy payment;
  std::int64_t rounds_max = 20000;
  std::uint64_t seed = 0;
  std::optional<PopulationState> init;
  double mutation = 0.0;
  double tol = 1e-3;
  std::optional<SweepSpec> sweep;

  bool operator==(const RunConfig&) const = default;
};

// key=value lines; '#' starts a comment. Required: game, d, a, alpha, beta,
// payment, n. init_r/init_c/init_d come together and are renormalized when
// their sum is within 1e-6 of 1. Sweep keys come together.
RunConfig parse_config(std::string_view text);

// Inverse of parse_config; doubles are written with 17 significant digits.
std::string serialize(const RunConfig& config);

// The value of `param` at sweep point k of `steps` evenly spaced points.
double sweep_value(const SweepSpec& sweep, std::int64_t k);

// The composition used by analyze / evolve: init, or the uniform state.
PopulationState initial_state(const RunConfig& config);

EvolveConfig to_evolve_config(const RunConfig& config);

}  // namespace repgame

#endif  // REPGAME_CONFIG_HPP_
