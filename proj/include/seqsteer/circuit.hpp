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
#include <vector>

#include "seqsteer/linalg.hpp"
#include "seqsteer/measurement.hpp"
#include "seqsteer/states.hpp"

namespace seqsteer::circuit {

/// Normalized pure state of n qubits. Qubit 0 is the most significant bit of the
/// amplitude index (the leftmost tensor factor).
class StateVector {
 public:
  /// |0...0>.
  explicit StateVector(int n_qubits);
  /// Throws std::invalid_argument unless the size is 2^n and the norm is 1 within 1e-12.
  StateVector(int n_qubits, ComplexVector amplitudes);

  int n_qubits() const { return n_qubits_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }

  /// Probability that a Z measurement of `qubit` gives `bit`.
  double probability(int qubit, int bit) const;

  /// Applies a 2x2 unitary to one qubit.
  StateVector apply(int qubit, const ComplexMatrix& u) const;
  /// Applies a 2x2 unitary to `target` when `control` is 1.
  StateVector apply_controlled(int control, int target, const ComplexMatrix& u) const;

  /// Post-measurement state for outcome `bit` of `qubit`, with its probability.
  /// Throws std::domain_error if the outcome has zero probability.
  std::pair<StateVector, double> measure(int qubit, int bit) const;

 private:
  void check_qubit(int q) const;

  int n_qubits_;
  ComplexVector amplitudes_;
};

ComplexMatrix hadamard();
ComplexMatrix pauli_x();
ComplexMatrix pauli_z();
/// exp(-i t Y / 2).
ComplexMatrix ry(double t);

/// R_y(2 theta) and H on the ancilla, controlled-X onto the target, H on the
/// ancilla. Ancilla outcome 0 (1) applies the Kraus operator of X_theta with
/// outcome +1 (-1) to the target, provided the ancilla starts in |0>.
StateVector gate_xtheta(int ancilla, int target, double theta, const StateVector& sv);

/// As gate_xtheta with a controlled-Z, realizing Z_phi.
StateVector gate_zphi(int ancilla, int target, double phi, const StateVector& sv);

enum class AncillaMode {
  /// One ancilla per round, all measured after the last gate.
  kDeferred,
  /// One ancilla per round, each measured right after its gate.
  kImmediate,
  /// A single ancilla measured after every round and reset to |0> with a
  /// classically controlled X.
  kSingleReset,
};

struct Branch {
  BitString outcomes;
  double probability = 0.0;
  /// Alice's normalized conditional state (zero matrix when probability is 0).
  ComplexMatrix alice;
  /// probability * alice.
  ComplexMatrix unnormalized() const { return probability * alice; }
};

/// Runs the classically controlled circuit for input string `y` on Bob's half of
/// `state` (mixed states by convex combination over their pure components).
/// Registers: ancillas, then Alice, then Bob last. Returns one branch per outcome
/// string in lexicographic order. Throws std::invalid_argument when `y` does not
/// match the schedule's round count.
std::vector<Branch> simulate_protocol(const TwoQubitState& state, const MeasurementSchedule& schedule,
                                      const BitString& y, AncillaMode mode = AncillaMode::kDeferred);

/// Round-k assemblage assembled from circuit runs over every input string.
Assemblage circuit_assemblage(const TwoQubitState& state, const MeasurementSchedule& schedule, int k,
                              AncillaMode mode = AncillaMode::kDeferred);

struct OracleReport {
  int cases = 0;
  /// Largest |p_circuit(b|y) - p_kraus(b|y)| over all cases and outcome strings.
  double max_probability_deviation = 0.0;
  /// Largest Frobenius distance between normalized conditional states.
  double max_state_deviation = 0.0;
};

/// Compares simulate_protocol with the Kraus-operator assemblage on `cases`
/// random mixed states, schedules (1 to 3 rounds) and input strings, cycling
/// through the ancilla modes. Deterministic for a given seed.
OracleReport oracle_check(int cases, std::uint64_t seed);

}  // namespace seqsteer::circuit
