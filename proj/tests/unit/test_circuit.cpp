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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "seqsteer/circuit.hpp"
#include "support.hpp"

using namespace seqsteer;
using namespace seqsteer::circuit;

namespace {

constexpr double kPi4 = std::numbers::pi / 4;

/// Ancilla (qubit 0) in |0>, target (qubit 1) in `t`.
StateVector with_target(const ComplexVector& t) {
  ComplexVector amps = ComplexVector::Zero(4);
  amps(0) = t(0);
  amps(1) = t(1);
  return StateVector(2, amps);
}

ComplexVector ket(Complex a, Complex b) { return (ComplexVector(2) << a, b).finished(); }

/// Target state after measuring the ancilla with outcome `bit`, normalized.
ComplexVector target_after(const StateVector& sv, int bit) {
  const auto [post, p] = sv.measure(0, bit);
  ComplexVector t(2);
  t(0) = post.amplitudes()(bit << 1);
  t(1) = post.amplitudes()((bit << 1) | 1);
  return t;
}

double overlap(const ComplexVector& a, const ComplexVector& b) { return std::abs(a.dot(b)); }

}  // namespace

TEST_SUITE("circuit") {
  TEST_CASE("state vector construction") {
    CHECK(StateVector(3).amplitudes().size() == 8);
    CHECK_THROWS_AS(StateVector(2, ComplexVector::Zero(3)), std::invalid_argument);
    CHECK_THROWS_AS(StateVector(1, ket(1.0, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(StateVector(1).apply(1, hadamard()), std::out_of_range);
    CHECK_THROWS_AS(StateVector(2).apply_controlled(0, 0, pauli_x()), std::invalid_argument);
    CHECK_THROWS_AS(StateVector(1).measure(0, 1), std::domain_error);
  }

  TEST_CASE("projective X on an eigenstate is deterministic") {
    const auto sv = gate_xtheta(0, 1, 0.0, with_target(ket(1.0, 1.0) / std::sqrt(2.0)));
    CHECK(sv.probability(0, 0) == doctest::Approx(1.0));
    CHECK(sv.probability(0, 1) == doctest::Approx(0.0));
  }

  TEST_CASE("trivial measurements leave the target alone") {
    const ComplexVector t = ket(0.6, Complex(0.0, 0.8));
    for (auto gate : {gate_xtheta, gate_zphi}) {
      const auto sv = gate(0, 1, kPi4, with_target(t));
      CHECK(sv.probability(0, 0) == doctest::Approx(0.5));
      CHECK(overlap(target_after(sv, 0), t) == doctest::Approx(1.0));
      CHECK(overlap(target_after(sv, 1), t) == doctest::Approx(1.0));
    }
  }

  TEST_CASE("noisy X on |0> matches the Kraus operators") {
    const ComplexVector t = ket(1.0, 0.0);
    const auto sv = gate_xtheta(0, 1, 0.2, with_target(t));
    CHECK(sv.probability(0, 0) == doctest::Approx(0.5));
    for (int bit = 0; bit < 2; ++bit) {
      const ComplexVector want = (kraus(Basis::kX, 0.2, bit == 0 ? Outcome::kPlus : Outcome::kMinus).matrix * t).normalized();
      CHECK(overlap(target_after(sv, bit), want) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("projective Z on |1> gives outcome -1") {
    const auto sv = gate_zphi(0, 1, 0.0, with_target(ket(0.0, 1.0)));
    CHECK(sv.probability(0, 1) == doctest::Approx(1.0));
  }

  TEST_CASE("noisy Z on |+> matches the Kraus operators") {
    const ComplexVector t = ket(1.0, 1.0) / std::sqrt(2.0);
    const auto sv = gate_zphi(0, 1, 0.08, with_target(t));
    CHECK(sv.probability(0, 0) == doctest::Approx(0.5));
    for (int bit = 0; bit < 2; ++bit) {
      const ComplexVector want = (kraus(Basis::kZ, 0.08, bit == 0 ? Outcome::kPlus : Outcome::kMinus).matrix * t).normalized();
      CHECK(overlap(target_after(sv, bit), want) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("gates need distinct qubits") {
    CHECK_THROWS_AS(gate_xtheta(1, 1, 0.1, StateVector(2)), std::invalid_argument);
    CHECK_THROWS_AS(gate_zphi(0, 2, 0.1, StateVector(2)), std::out_of_range);
  }

  TEST_CASE("property: gates preserve the norm") {
    for (int t = 0; t < 30; ++t) {
      ComplexVector amps(8);
      for (Eigen::Index i = 0; i < 8; ++i) amps(i) = seqsteer::testing::random_matrix(1)(0, 0);
      StateVector sv(3, amps.normalized());
      sv = gate_xtheta(t % 3, (t + 1) % 3, seqsteer::testing::uniform(0, kPi4), sv);
      sv = gate_zphi((t + 2) % 3, t % 3, seqsteer::testing::uniform(0, kPi4), sv);
      CHECK(std::abs(sv.norm() - 1.0) < 1e-12);
    }
  }

  TEST_CASE("Phi+ steered by projective X through the circuit") {
    const MeasurementSchedule s({0.0}, {0.0}, BitString::parse("1"));
    const auto br = simulate_protocol(pure_state(kPi4), s, BitString::parse("1"));
    REQUIRE(br.size() == 2);
    const ComplexMatrix plus = outer(ket(1.0, 1.0) / std::sqrt(2.0));
    const ComplexMatrix minus = outer(ket(1.0, -1.0) / std::sqrt(2.0));
    CHECK(br[0].probability == doctest::Approx(0.5));
    CHECK((br[0].alice - plus).norm() < 1e-12);
    CHECK((br[1].alice - minus).norm() < 1e-12);
  }

  TEST_CASE("product state leaves Alice in |0>") {
    const MeasurementSchedule s({0.3, 0.1}, {0.2, 0.0}, BitString::parse("10"));
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    for (const auto& y : BitString::all(2))
      for (const auto& b : simulate_protocol(pure_state(0.0), s, y))
        if (b.probability > 1e-12) CHECK((b.alice - p0).norm() < 1e-12);
  }

  TEST_CASE("two-round distribution equals the Kraus path") {
    const auto state = pure_state(kPi4);
    const MeasurementSchedule s({0.3, 0.0}, {0.0, 0.0}, BitString::parse("10"));
    const auto a = build_assemblage(state, s, 2);
    const auto y = BitString::parse("10");
    double total = 0.0;
    for (const auto& b : simulate_protocol(state, s, y)) {
      CHECK(std::abs(b.probability - real_trace(a(b.outcomes, y))) < 1e-10);
      CHECK((b.unnormalized() - a(b.outcomes, y)).norm() < 1e-10);
      total += b.probability;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("ancilla modes agree") {
    const auto state = seqsteer::testing::random_state();
    const MeasurementSchedule s({0.3, 0.1, 0.0}, {0.2, 0.08, 0.0}, BitString::parse("101"));
    for (int k = 1; k <= 3; ++k) {
      const auto ref = circuit_assemblage(state, s, k, AncillaMode::kDeferred);
      for (auto mode : {AncillaMode::kImmediate, AncillaMode::kSingleReset}) {
        const auto other = circuit_assemblage(state, s, k, mode);
        for (std::uint32_t b = 0; b < (1u << k); ++b)
          for (std::uint32_t y = 0; y < (1u << k); ++y) CHECK((ref.at(b, y) - other.at(b, y)).norm() < 1e-12);
      }
    }
  }

  TEST_CASE("schedule mismatch is rejected") {
    const MeasurementSchedule s({0.3}, {0.0}, BitString::parse("1"));
    CHECK_THROWS_AS(simulate_protocol(pure_state(0.3), s, BitString::parse("10")), std::invalid_argument);
    CHECK_THROWS_AS(circuit_assemblage(pure_state(0.3), s, 2), std::invalid_argument);
  }

  TEST_CASE("property: randomized oracle battery") {
    const auto r = oracle_check(120, 7);
    CHECK(r.cases == 120);
    CHECK(r.max_probability_deviation <= 1e-10);
    CHECK(r.max_state_deviation <= 1e-10);
  }
}
