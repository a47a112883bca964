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

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "seqsteer/linalg.hpp"

namespace seqsteer {

/// Bell basis in the fixed order (Phi+, Phi-, Psi+, Psi-).
enum class Bell { kPhiPlus = 0, kPhiMinus = 1, kPsiPlus = 2, kPsiMinus = 3 };

ComplexVector bell_vector(Bell which);
ComplexMatrix bell_projector(Bell which);

struct PureLabel {
  double zeta;
};
struct IonTrapLabel {
  double epsilon;
  int purification_round;
};
struct CustomLabel {
  std::string name;
};
using StateLabel = std::variant<PureLabel, IonTrapLabel, CustomLabel>;

std::string describe(const StateLabel& label);

/// One term p |psi><psi| of a convex decomposition of a two-qubit state.
struct PureComponent {
  double weight;
  ComplexVector amplitudes;  // length 4, |ab> ordering with Alice major
};

/// A validated two-qubit density matrix (Alice first, Bob second).
///
/// Construction checks Hermiticity (1e-10), unit trace (1e-10) and positivity (1e-9).
/// The state also carries a pure-state ensemble realizing it, which the circuit
/// simulator consumes.
class TwoQubitState {
 public:
  TwoQubitState(ComplexMatrix rho, StateLabel label);
  TwoQubitState(std::vector<PureComponent> ensemble, StateLabel label);

  const ComplexMatrix& rho() const { return rho_; }
  const StateLabel& label() const { return label_; }
  const std::vector<PureComponent>& ensemble() const { return ensemble_; }

 private:
  ComplexMatrix rho_;
  StateLabel label_;
  std::vector<PureComponent> ensemble_;
};

/// Raised when an ion-trap infidelity drives a Bell weight negative.
class NegativeWeightError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// cos(zeta)|00> + sin(zeta)|11>, zeta in [0, pi/4].
TwoQubitState pure_state(double zeta);

/// Raw Bell weights (Phi+, Phi-, Psi+, Psi-) of the ion-trap state after
/// `round` purification rounds, before renormalization.
std::array<double, 4> ion_trap_weights(double epsilon, int round);

/// Bell-diagonal ion-trap state; weights renormalized to sum to one.
TwoQubitState ion_trap_state(double epsilon, int round);

/// Bell-diagonal state from explicit weights; weights must be nonnegative and sum to one.
TwoQubitState bell_diagonal_state(const std::array<double, 4>& weights, StateLabel label);

/// Uhlmann fidelity tr sqrt(sqrt(rho) tau sqrt(rho)).
double fidelity(const TwoQubitState& state, const TwoQubitState& target);
double fidelity(const ComplexMatrix& rho, const ComplexMatrix& tau);

}  // namespace seqsteer
