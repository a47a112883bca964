// Copyright 2026 The seqsteer Authors
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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "seqsteer/measurement.hpp"

namespace seqsteer {

/// Largest round count for which strategies are enumerated (16384 strategies at k = 3).
inline constexpr int kMaxStrategyRounds = 3;

/// Deterministic response y -> b over k rounds where output bit i depends only on
/// inputs 1..i. Tables violating that are rejected at construction.
class DeterministicStrategy {
 public:
  /// table[y.bits] = b.bits for each of the 2^k input strings.
  DeterministicStrategy(int round, std::vector<std::uint32_t> table);

  int round() const { return round_; }
  const std::vector<std::uint32_t>& table() const { return table_; }
  std::uint32_t response(std::uint32_t y) const { return table_[y]; }

  friend bool operator==(const DeterministicStrategy&, const DeterministicStrategy&) = default;

 private:
  int round_;
  std::vector<std::uint32_t> table_;
};

bool is_causal(int round, const std::vector<std::uint32_t>& table);

/// Every causal deterministic strategy over k rounds, k in [1, 3].
std::vector<DeterministicStrategy> enumerate_strategies(int k);

/// Number of causal strategies: prod_{i<=k} 2^(2^i).
std::uint64_t causal_strategy_count(int k);

/// D(b|y, lambda): 1 if the strategy answers y with b, else 0.
int evaluate(const DeterministicStrategy& d, const BitString& b, const BitString& y);

}  // namespace seqsteer
