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

#include "seqsteer/measurement.hpp"
#include "seqsteer/states.hpp"
#include "support.hpp"

using namespace seqsteer;

TEST_SUITE("states") {
  TEST_CASE("pure state endpoints") {
    ComplexMatrix p00 = ComplexMatrix::Zero(4, 4);
    p00(0, 0) = 1.0;
    CHECK((pure_state(0.0).rho() - p00).norm() < 1e-15);
    CHECK((pure_state(std::numbers::pi / 4).rho() - bell_projector(Bell::kPhiPlus)).norm() < 1e-15);
  }

  TEST_CASE("pure state at pi/8 has the expected marginal") {
    const double z = std::numbers::pi / 8;
    const ComplexMatrix r = reduced_alice(pure_state(z));
    CHECK(r(0, 0).real() == doctest::Approx(std::pow(std::cos(z), 2)));
    CHECK(r(1, 1).real() == doctest::Approx(std::pow(std::sin(z), 2)));
  }

  TEST_CASE("pure state rejects angles outside [0, pi/4]") {
    CHECK_THROWS_AS(pure_state(-0.01), std::out_of_range);
    CHECK_THROWS_AS(pure_state(0.8), std::out_of_range);
  }

  TEST_CASE("raw ion-trap state") {
    CHECK((ion_trap_state(0.0, 0).rho() - bell_projector(Bell::kPhiPlus)).norm() < 1e-15);
    const auto w = ion_trap_weights(0.15, 0);
    CHECK(w[0] == doctest::Approx(0.85));
    CHECK(w[1] == doctest::Approx(0.05));
    CHECK(w[2] == doctest::Approx(0.05));
    CHECK(w[3] == doctest::Approx(0.05));
    const ComplexMatrix want = 0.85 * bell_projector(Bell::kPhiPlus) + 0.05 * bell_projector(Bell::kPhiMinus) +
                               0.05 * bell_projector(Bell::kPsiPlus) + 0.05 * bell_projector(Bell::kPsiMinus);
    CHECK((ion_trap_state(0.15, 0).rho() - want).norm() < 1e-14);
  }

  TEST_CASE("second purification round weight before renormalization") {
    const double e = 0.15;
    CHECK(ion_trap_weights(e, 2)[0] == doctest::Approx(1 - 8.0 / 9 * e * e - 8.0 / 27 * e * e * e).epsilon(1e-14));
    CHECK(ion_trap_weights(e, 2)[0] == doctest::Approx(0.979).epsilon(1e-3));
  }

  TEST_CASE("purified states are normalized Bell-diagonal states") {
    for (int r = 0; r <= 3; ++r) {
      const auto s = ion_trap_state(0.15, r);
      CHECK(real_trace(s.rho()) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(is_psd(s.rho(), 1e-12));
      CHECK((reduced_alice(s) - identity(2) / 2.0).norm() < 1e-14);
    }
  }

  TEST_CASE("ion-trap errors") {
    CHECK_THROWS_AS(ion_trap_state(-0.1, 0), std::out_of_range);
    CHECK_THROWS_AS(ion_trap_state(0.1, 4), std::out_of_range);
    CHECK_THROWS_AS(ion_trap_state(1.0, 1), NegativeWeightError);
  }

  TEST_CASE("property: Phi+ weight grows with purification") {
    for (double e = 0.01; e <= 0.15 + 1e-12; e += 0.01) {
      const double w0 = ion_trap_state(e, 0).rho().real().cwiseProduct(bell_projector(Bell::kPhiPlus).real()).sum();
      const double w1 = ion_trap_state(e, 1).rho().real().cwiseProduct(bell_projector(Bell::kPhiPlus).real()).sum();
      const double w3 = ion_trap_state(e, 3).rho().real().cwiseProduct(bell_projector(Bell::kPhiPlus).real()).sum();
      CHECK(w1 >= w0);
      CHECK(w3 >= w1);
    }
  }

  TEST_CASE("fidelity examples") {
    const auto phi = ion_trap_state(0.0, 0);
    CHECK(fidelity(phi, phi) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fidelity(identity(4) / 4.0, phi.rho()) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(fidelity(ion_trap_state(0.15, 0), phi) == doctest::Approx(std::sqrt(0.85)).epsilon(1e-9));
  }

  TEST_CASE("property: fidelity is symmetric and one on the diagonal") {
    for (int t = 0; t < 10; ++t) {
      const auto a = seqsteer::testing::random_state();
      const auto b = seqsteer::testing::random_state();
      CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(std::abs(fidelity(a, b) - fidelity(b, a)) < 1e-9);
      const double f = fidelity(a, b);
      CHECK(f >= 0.0);
      CHECK(f <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("state validation") {
    CHECK_THROWS_AS(TwoQubitState(identity(3) / 3.0, CustomLabel{"bad"}), DimensionError);
    CHECK_THROWS_AS(TwoQubitState(identity(4), CustomLabel{"bad"}), std::invalid_argument);
    ComplexMatrix neg = identity(4) / 4.0;
    neg(0, 0) = -0.1;
    neg(1, 1) = 0.6;
    CHECK_THROWS_AS(TwoQubitState(neg, CustomLabel{"bad"}), NotHermitianError);
  }

  TEST_CASE("ensemble reproduces the density matrix") {
    const auto s = ion_trap_state(0.1, 1);
    ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
    for (const auto& c : s.ensemble()) sum += c.weight * outer(c.amplitudes);
    CHECK((sum - s.rho()).norm() < 1e-12);
  }
}
