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

#include "seqsteer/strategies.hpp"

#include <string>

namespace seqsteer {

bool is_causal(int round, const std::vector<std::uint32_t>& table) {
  const std::uint32_t n = 1u << round;
  if (table.size() != n) return false;
  for (std::uint32_t y = 0; y < n; ++y) {
    if (table[y] >= n) return false;
    for (std::uint32_t y2 = y + 1; y2 < n; ++y2) {
      for (int i = 1; i <= round; ++i) {
        const int drop = round - i;
        if ((y >> drop) == (y2 >> drop) && (table[y] >> drop) != (table[y2] >> drop)) return false;
      }
    }
  }
  return true;
}

DeterministicStrategy::DeterministicStrategy(int round, std::vector<std::uint32_t> table)
    : round_(round), table_(std::move(table)) {
  if (round_ < 1 || round_ > 8) throw std::out_of_range("DeterministicStrategy: bad round count");
  if (!is_causal(round_, table_)) {
    throw std::invalid_argument("DeterministicStrategy: table is not causal");
  }
}

std::uint64_t causal_strategy_count(int k) {
  std::uint64_t count = 1;
  for (int i = 1; i <= k; ++i) count <<= (1u << i);
  return count;
}

std::vector<DeterministicStrategy> enumerate_strategies(int k) {
  if (k < 1 || k > kMaxStrategyRounds) {
    throw std::out_of_range("enumerate_strategies: k must lie in [1, " +
                            std::to_string(kMaxStrategyRounds) + "], got " + std::to_string(k));
  }
  // Round-i output is a boolean function f_i of the first i inputs, encoded as a
  // 2^i-bit truth table. Strategies are the product of these choices.
  std::vector<std::uint32_t> radix(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) radix[static_cast<std::size_t>(i - 1)] = 1u << (1u << i);

  const std::uint32_t inputs = 1u << k;
  std::vector<DeterministicStrategy> out;
  out.reserve(causal_strategy_count(k));
  std::vector<std::uint32_t> digit(static_cast<std::size_t>(k), 0);
  for (;;) {
    std::vector<std::uint32_t> table(inputs, 0);
    for (std::uint32_t y = 0; y < inputs; ++y) {
      std::uint32_t b = 0;
      for (int i = 1; i <= k; ++i) {
        const std::uint32_t prefix = y >> (k - i);
        b = (b << 1) | ((digit[static_cast<std::size_t>(i - 1)] >> prefix) & 1u);
      }
      table[y] = b;
    }
    out.emplace_back(k, std::move(table));

    int pos = k - 1;
    while (pos >= 0 && ++digit[static_cast<std::size_t>(pos)] == radix[static_cast<std::size_t>(pos)]) {
      digit[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

int evaluate(const DeterministicStrategy& d, const BitString& b, const BitString& y) {
  if (b.length != d.round() || y.length != d.round()) {
    throw std::invalid_argument("evaluate: string length does not match strategy round");
  }
  return d.response(y.bits) == b.bits ? 1 : 0;
}

}  // namespace seqsteer
