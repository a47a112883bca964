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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "seqsteer/linalg.hpp"
#include "seqsteer/states.hpp"

namespace seqsteer {

/// Binary string over rounds 1..k; round 1 is the leftmost character and the most
/// significant bit of `bits`. Outcomes use '0' for +1 and '1' for -1; inputs use
/// '1' for the X basis and '0' for the Z basis.
struct BitString {
  std::uint32_t bits = 0;
  int length = 0;

  /// Bit of round `round` (0-based).
  int at(int round) const;
  BitString prefix(int len) const;
  BitString append(int bit) const;
  std::string str() const;

  static BitString parse(std::string_view text);
  /// All 2^length strings in lexicographic order.
  static std::vector<BitString> all(int length);

  friend auto operator<=>(const BitString&, const BitString&) = default;
};

enum class Basis { kZ = 0, kX = 1 };

/// Outcome b = +1 or -1; stored as the outcome bit (+1 -> 0, -1 -> 1).
enum class Outcome { kPlus = 0, kMinus = 1 };

inline int sign(Outcome o) { return o == Outcome::kPlus ? 1 : -1; }

struct KrausOp {
  Basis basis;
  double angle;
  Outcome outcome;
  ComplexMatrix matrix;
};

/// Noisy X_theta / Z_phi Kraus operator. Angles must lie in [0, pi/4].
KrausOp kraus(Basis basis, double angle, Outcome outcome);

/// Pi^dagger Pi.
ComplexMatrix povm_element(const KrausOp& k);

/// Per-round measurement angles and the input string Eve is asked to guess.
///
/// Round j measures X_{thetas[j]} when its input is 1 and Z_{phis[j]} when it is 0.
class MeasurementSchedule {
 public:
  MeasurementSchedule(std::vector<double> thetas, std::vector<double> phis, BitString y_star);

  int n_rounds() const { return static_cast<int>(thetas_.size()); }
  const std::vector<double>& thetas() const { return thetas_; }
  const std::vector<double>& phis() const { return phis_; }
  const BitString& y_star() const { return y_star_; }

  double angle(int round, int input) const { return input == 1 ? thetas_[round] : phis_[round]; }
  bool final_round_projective() const;
  /// Final round projective and first target input in the X basis.
  bool is_protocol_form() const;

 private:
  std::vector<double> thetas_;
  std::vector<double> phis_;
  BitString y_star_;
};

/// Unnormalized conditional states sigma_{b|y} of Alice for k rounds, dense over
/// all 2^k x 2^k (outcome, input) string pairs.
class Assemblage {
 public:
  Assemblage(int round, std::vector<ComplexMatrix> elements);

  int round() const { return round_; }
  int strings() const { return 1 << round_; }
  const ComplexMatrix& operator()(const BitString& b, const BitString& y) const;
  const ComplexMatrix& at(std::uint32_t b, std::uint32_t y) const {
    return elements_[(static_cast<std::size_t>(b) << round_) | y];
  }
  double probability(const BitString& b, const BitString& y) const;
  /// sum_b sigma_{b|y} for the given input string.
  ComplexMatrix marginal(std::uint32_t y) const;

 private:
  int round_;
  std::vector<ComplexMatrix> elements_;
};

/// Kraus operator of the k-round sequence Pi_{b_k|y_k} ... Pi_{b_1|y_1}.
ComplexMatrix sequence_kraus(const MeasurementSchedule& schedule, const BitString& b,
                             const BitString& y);

Assemblage build_assemblage(const TwoQubitState& state, const MeasurementSchedule& schedule,
                            int k);

ComplexMatrix reduced_alice(const TwoQubitState& state);

}  // namespace seqsteer
