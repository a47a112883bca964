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

#include "../common/lhs_oracle.hpp"
#include "seqsteer/certifier.hpp"
#include "seqsteer/strategies.hpp"
#include "support.hpp"

using namespace seqsteer;
using seqsteer::testing::brute_force_steering_weight;
using seqsteer::testing::dual_slack;

namespace {

constexpr double kPi4 = std::numbers::pi / 4;

Assemblage one_round(const TwoQubitState& s, double theta, double phi = 0.0) {
  return build_assemblage(s, MeasurementSchedule({theta}, {phi}, BitString::parse("1")), 1);
}

void check_functional(const SteeringFunctional& f) {
  const auto [lhs, pos] = dual_slack(f);
  CHECK(lhs >= -1e-7);
  CHECK(pos >= -1e-7);
}

}  // namespace

TEST_SUITE("certifier") {
  TEST_CASE("product state has zero steering weight") {
    const auto sw = steering_weight(one_round(pure_state(0.0), 0.2), enumerate_strategies(1));
    CHECK(sw.steering_weight <= 1e-6);
    check_functional(sw.functional);
  }

  TEST_CASE("maximally entangled state under projective X and Z is fully steered") {
    // Every LHS state would have to lie below two rank-one projectors in
    // different directions, so the LHS part vanishes.
    const auto a = one_round(pure_state(kPi4), 0.0);
    const auto sw = steering_weight(a, enumerate_strategies(1));
    CHECK(sw.steering_weight == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(brute_force_steering_weight(a) == doctest::Approx(1.0).epsilon(1e-9));
    check_functional(sw.functional);
  }

  TEST_CASE("trivial measurement at one input leaves an LHS model") {
    std::vector<ComplexMatrix> el(4);
    ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
    p0(0, 0) = 0.5;
    p1(1, 1) = 0.5;
    el[(0u << 1) | 0] = p0;
    el[(1u << 1) | 0] = p1;
    el[(0u << 1) | 1] = identity(2) / 4.0;
    el[(1u << 1) | 1] = identity(2) / 4.0;
    const Assemblage a(1, el);
    const auto sw = steering_weight(a, enumerate_strategies(1));
    CHECK(sw.steering_weight <= 1e-6);
    CHECK(brute_force_steering_weight(a) <= 1e-6);
  }

  TEST_CASE("noisy X against projective Z on Phi+ has weight cos(2 theta)") {
    // Symmetric LHS weights a obey a <= (1 - cos 2theta) / 4 on each of the four strategies.
    for (double theta : {0.05, 0.2, 0.4, 0.6, 0.75}) {
      const auto a = one_round(pure_state(kPi4), theta);
      const auto sw = steering_weight(a, enumerate_strategies(1));
      CHECK(sw.steering_weight == doctest::Approx(std::cos(2 * theta)).epsilon(1e-6));
      CHECK(std::abs(brute_force_steering_weight(a) - sw.steering_weight) < 1e-4);
      CHECK(std::abs(sw.steering_weight - (1.0 - sw.functional.violation)) < 1e-6);
      check_functional(sw.functional);
    }
  }

  TEST_CASE("property: primal search agrees with the dual on partially entangled states") {
    for (int t = 0; t < 6; ++t) {
      const double zeta = seqsteer::testing::uniform(0.05, kPi4);
      const double theta = seqsteer::testing::uniform(0.0, kPi4);
      const auto a = one_round(pure_state(zeta), theta);
      const auto sw = steering_weight(a, enumerate_strategies(1));
      const double primal = brute_force_steering_weight(a);
      // Weak duality: a feasible decomposition never beats the optimum.
      CHECK(primal >= sw.steering_weight - 1e-6);
      CHECK(primal - sw.steering_weight < 1e-4);
    }
  }

  TEST_CASE("property: returned functionals are dual feasible and tight") {
    std::vector<Assemblage> cases;
    cases.push_back(one_round(ion_trap_state(0.15, 0), 0.1, 0.0));
    cases.push_back(one_round(seqsteer::testing::random_state(), 0.3, 0.2));
    const MeasurementSchedule two({0.35, 0.0}, {0.0, 0.0}, BitString::parse("10"));
    cases.push_back(build_assemblage(pure_state(kPi4), two, 2));
    cases.push_back(build_assemblage(ion_trap_state(0.05, 1), two, 2));
    const MeasurementSchedule noisy({0.2, 0.1}, {0.05, 0.3}, BitString::parse("10"));
    cases.push_back(build_assemblage(seqsteer::testing::random_state(), noisy, 2));
    for (const auto& a : cases) {
      const auto sw = steering_weight(a, enumerate_strategies(a.round()));
      CHECK(sw.steering_weight >= 0.0);
      CHECK(sw.steering_weight <= 1.0);
      check_functional(sw.functional);
      CHECK(std::abs(sw.steering_weight - (1.0 - sw.functional.violation)) < 1e-6);
    }
  }

  TEST_CASE("steering weight argument checks") {
    const auto a = one_round(pure_state(0.3), 0.1);
    CHECK_THROWS_AS(steering_weight(a, {}), std::invalid_argument);
    CHECK_THROWS_AS(steering_weight(a, enumerate_strategies(2)), std::invalid_argument);
  }

  TEST_CASE("explicit functional examples") {
    const ComplexVector psi = (ComplexVector(2) << 0.6, Complex(0.0, 0.8)).finished();
    std::vector<ComplexMatrix> el(4, 0.25 * outer(psi));
    el[0] = 0.5 * outer(psi);
    el[2] = ComplexMatrix::Zero(2, 2) + 0.5 * outer((ComplexVector(2) << 1.0, 0.0).finished());
    el[1] = identity(2) / 4.0;
    el[3] = identity(2) / 4.0;
    const Assemblage a(1, el);
    const auto f = projective_functional(a, 100.0);
    // Pure element: zero contribution.
    CHECK(std::abs(trace_inner(f.at(0, 0), a.at(0, 0))) < 1e-12);
    CHECK((f.at(0, 0) - 100.0 * (identity(2) - outer(psi))).norm() < 1e-12);
    // Mixed element: alpha / 2 times the identity, contribution alpha / 4.
    CHECK((f.at(0, 1) - 50.0 * identity(2)).norm() < 1e-12);
    CHECK(trace_inner(f.at(0, 1), a.at(0, 1)) == doctest::Approx(25.0));
    // 0.5 |0><0| gives 100 |1><1|.
    ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
    p1(1, 1) = 100.0;
    CHECK((f.at(1, 0) - p1).norm() < 1e-12);
    CHECK(f.alpha == 100.0);
  }

  TEST_CASE("explicit functional vanishes on pure final rounds") {
    const MeasurementSchedule s({0.3, 0.0}, {0.0, 0.0}, BitString::parse("10"));
    const auto a = build_assemblage(pure_state(kPi4), s, 2);
    for (double alpha : {1.0, 100.0, 1e4}) CHECK(std::abs(projective_functional_lenient(a, alpha).violation) < 1e-8);
  }

  TEST_CASE("property: explicit violations scale linearly with alpha") {
    const auto a = one_round(seqsteer::testing::random_state(), 0.2, 0.3);
    const double v1 = projective_functional(a, 1.0).violation;
    CHECK(v1 > 0.0);
    for (double alpha : {0.5, 7.0, 100.0})
      CHECK(projective_functional(a, alpha).violation == doctest::Approx(alpha * v1).epsilon(1e-12));
  }

  TEST_CASE("explicit functional errors") {
    const auto a = one_round(pure_state(0.0), 0.0, 0.0);  // sigma_{1|0} = 0
    CHECK_THROWS_AS(projective_functional(a), ZeroTraceError);
    CHECK_THROWS_AS(projective_functional(one_round(pure_state(0.3), 0.1), 0.0), std::invalid_argument);
    const auto lenient = projective_functional_lenient(a, 3.0);
    CHECK((lenient.at(1, 0) - 3.0 * identity(2)).norm() < 1e-15);
  }

  TEST_CASE("min-entropy examples") {
    CHECK(min_entropy(0.5) == doctest::Approx(1.0));
    CHECK(min_entropy(1.0) == 0.0);
    CHECK(min_entropy(0.25) == doctest::Approx(2.0));
    CHECK_THROWS_AS(min_entropy(0.0), std::domain_error);
    CHECK_THROWS_AS(min_entropy(-0.1), std::domain_error);
    CHECK_THROWS_AS(min_entropy(1.5), std::domain_error);
  }

  TEST_CASE("guessing probability, one round") {
    SUBCASE("Phi+ with projective X target") {
      const auto s = pure_state(kPi4);
      const auto a = one_round(s, 0.0);
      const auto sw = steering_weight(a, enumerate_strategies(1));
      for (const auto& g : BitString::all(1)) {
        const auto r = guessing_probability({sw.functional}, reduced_alice(s), BitString::parse("1"), g);
        CHECK(r.probability == doctest::Approx(0.5).epsilon(1e-4));
      }
    }
    SUBCASE("unsteerable assemblage") {
      const auto s = pure_state(kPi4);
      const auto a = one_round(s, kPi4);
      const auto sw = steering_weight(a, enumerate_strategies(1));
      CHECK(sw.steering_weight <= 1e-6);
      double best = 0.0;
      for (const auto& g : BitString::all(1))
        best = std::max(best, guessing_probability({sw.functional}, reduced_alice(s), BitString::parse("1"), g)
                                  .probability);
      CHECK(best == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("product state") {
      const auto r = certify(pure_state(0.0), MeasurementSchedule({0.0}, {0.0}, BitString::parse("1")));
      CHECK(r.guessing_probability == doctest::Approx(1.0).epsilon(1e-6));
      CHECK(r.min_entropy_bits <= 1e-5);
    }
  }

  TEST_CASE("guessing problem argument checks") {
    const auto a = one_round(pure_state(0.3), 0.1);
    const auto f = projective_functional(a);
    const ComplexMatrix rho = reduced_alice(pure_state(0.3));
    CHECK_THROWS_AS(guessing_problem({}, rho, BitString::parse("1"), BitString::parse("0")), std::invalid_argument);
    CHECK_THROWS_AS(guessing_problem({f}, rho, BitString::parse("10"), BitString::parse("0")), std::invalid_argument);
    CHECK_THROWS_AS(guessing_problem({f, f}, rho, BitString::parse("10"), BitString::parse("00")),
                    std::invalid_argument);
  }

  TEST_CASE("guessing problem keeps every constraint block") {
    const MeasurementSchedule s({0.3, 0.0}, {0.0, 0.0}, BitString::parse("10"));
    const auto fs = round_functionals(pure_state(kPi4), s, {});
    const auto p = guessing_problem(fs, identity(2) / 2.0, BitString::parse("10"), BitString::parse("00"));
    CHECK(p.num_variables() == 4 + 16);
    CHECK(p.scalar_equalities().size() == 2);
    // Base case (2) + round-2 causality (2 * 2 * 2) + no-signalling (1 + 6).
    CHECK(p.matrix_equalities().size() == 2 + 8 + 1 + 6);
  }

  TEST_CASE("certify examples") {
    const auto r1 = certify(pure_state(kPi4), MeasurementSchedule({0.0}, {0.0}, BitString::parse("1")));
    CHECK(r1.guessing_probability == doctest::Approx(0.5).epsilon(5e-4));
    CHECK(r1.min_entropy_bits == doctest::Approx(1.0).epsilon(1.5e-3));
    CHECK(r1.solver_status == conic::SolveStatus::kOptimal);
    CHECK(r1.best_guess.str() == "0");  // ties resolve to the lexicographically first guess
    CHECK(std::abs(r1.min_entropy_bits + std::log2(r1.guessing_probability)) < 1e-9);

    const auto r2 =
        certify(pure_state(kPi4), MeasurementSchedule({0.3, 0.0}, {0.0, 0.0}, BitString::parse("10")));
    CHECK(r2.min_entropy_bits > 1.0);
    CHECK(r2.per_guess.size() == 4);
    CHECK(r2.per_round_violations.size() == 2);
    CHECK(std::abs(r2.per_round_violations[1]) < 1e-8);
    CHECK_THROWS_AS(certify(pure_state(kPi4), MeasurementSchedule({0.1, 0, 0, 0}, {0, 0, 0, 0},
                                                                   BitString::parse("1010"))),
                    std::out_of_range);
  }

  TEST_CASE("relaxing the violations can only help Eve") {
    const auto s = ion_trap_state(0.05, 0);
    const MeasurementSchedule sched({0.2, 0.0}, {0.0, 0.0}, BitString::parse("10"));
    CertifyOptions strict, relaxed;
    relaxed.guessing.relax_violation = true;
    const auto a = certify(s, sched, strict);
    const auto b = certify(s, sched, relaxed);
    CHECK(b.guessing_probability >= a.guessing_probability - 1e-6);
  }

  TEST_CASE("property: honest Eve is feasible") {
    for (int t = 0; t < 12; ++t) {
      const int n = 1 + t % 2;
      const auto state = t % 3 == 0 ? ion_trap_state(seqsteer::testing::uniform(0.0, 0.15), 0)
                                    : pure_state(seqsteer::testing::uniform(0.0, kPi4));
      std::vector<double> th(static_cast<std::size_t>(n), 0.0), ph(static_cast<std::size_t>(n), 0.0);
      th[0] = seqsteer::testing::uniform(0.0, kPi4);
      const BitString y = BitString::parse(n == 1 ? "1" : "10");
      const MeasurementSchedule s(th, ph, y);
      const auto r = certify(state, s);
      const auto ideal = build_assemblage(state, s, n);
      double honest = 0.0;
      for (std::uint32_t b = 0; b < (1u << n); ++b) honest = std::max(honest, real_trace(ideal.at(b, y.bits)));
      CHECK(r.guessing_probability >= honest - 1e-6);
      CHECK(r.guessing_probability >= std::pow(2.0, -n) - 1e-6);
      CHECK(r.guessing_probability <= 1.0 + 1e-6);
    }
  }
}
