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

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqsteer/conic.hpp"
#include "seqsteer/measurement.hpp"
#include "seqsteer/strategies.hpp"

namespace seqsteer {

inline constexpr double kDefaultAlpha = 100.0;

/// Steering inequality {F_{b|y}} for one round and the value v the ideal
/// assemblage attains on it.
struct SteeringFunctional {
  int round = 0;
  /// Indexed like Assemblage: (b << round) | y.
  std::vector<ComplexMatrix> coefficients;
  double violation = 0.0;
  std::optional<double> alpha;

  const ComplexMatrix& at(std::uint32_t b, std::uint32_t y) const {
    return coefficients[(static_cast<std::size_t>(b) << round) | y];
  }
};

/// tr sum_{b,y} F_{b|y} sigma_{b|y}.
double pairing(const SteeringFunctional& f, const Assemblage& a);

/// Raised when a solve does not reach a usable optimum.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, conic::SolveStatus status)
      : std::runtime_error(what), status_(status) {}
  conic::SolveStatus status() const { return status_; }

 private:
  conic::SolveStatus status_;
};

class ZeroTraceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct SteeringWeightResult {
  double steering_weight = 0.0;
  SteeringFunctional functional;
  /// LHS states sigma_lambda, one per strategy (multipliers of the dual constraints).
  std::vector<ComplexMatrix> lhs_states;
  conic::SolveStatus status = conic::SolveStatus::kOptimal;
};

/// Steering weight of `assemblage` against the given deterministic strategies and
/// the optimal steering inequality from the dual. Throws SolverError unless the
/// solve is optimal or inaccurate with residuals below 1e-6.
SteeringWeightResult steering_weight(const Assemblage& assemblage,
                                     const std::vector<DeterministicStrategy>& strategies,
                                     const conic::SolverOptions& options = {});

/// F = alpha (1 - sigma / tr sigma) for every element. Throws ZeroTraceError if an
/// element has (numerically) zero trace.
SteeringFunctional projective_functional(const Assemblage& assemblage, double alpha = kDefaultAlpha);

/// As above, but zero-trace elements receive F = alpha * 1, which forces the
/// matching adversarial element to vanish whenever the violation is zero.
SteeringFunctional projective_functional_lenient(const Assemblage& assemblage,
                                                 double alpha = kDefaultAlpha);

struct GuessingOptions {
  conic::SolverOptions solver;
  /// Replace sum F sigma^E = v_k by sum F sigma^E <= v_k (at least the observed violation).
  bool relax_violation = false;
};

struct GuessResult {
  double probability = 0.0;
  conic::SolveStatus status = conic::SolveStatus::kOptimal;
  /// Adversarial assemblages per round, indexed like Assemblage (empty if infeasible).
  std::vector<std::vector<ComplexMatrix>> eve;
  double max_residual = 0.0;
};

/// The guessing-probability SDP for one guessed outcome string. `functionals[k-1]`
/// belongs to round k; their stored violations are imposed on Eve's assemblages.
conic::ConicProblem guessing_problem(const std::vector<SteeringFunctional>& functionals,
                                     const ComplexMatrix& rho_a, const BitString& y_star,
                                     const BitString& guess, bool relax_violation = false);

GuessResult guessing_probability(const std::vector<SteeringFunctional>& functionals,
                                 const ComplexMatrix& rho_a, const BitString& y_star,
                                 const BitString& guess, const GuessingOptions& options = {});

/// -log2(p) for p in (0, 1].
double min_entropy(double p_guess);

enum class FinalFunctional {
  /// Explicit functional when the final round is projective, steering-weight dual otherwise.
  kAuto,
  kProjective,
  kSteeringWeight,
};

struct CertifyOptions {
  GuessingOptions guessing;
  double alpha = kDefaultAlpha;
  FinalFunctional final_functional = FinalFunctional::kAuto;
};

struct CertificationReport {
  double guessing_probability = 1.0;
  double min_entropy_bits = 0.0;
  std::vector<double> per_round_violations;
  /// Steering weight of each round solved through the steering-weight SDP (NaN otherwise).
  std::vector<double> steering_weights;
  BitString best_guess;
  /// Guessing probability of every outcome string, in lexicographic order.
  std::vector<double> per_guess;
  conic::SolveStatus solver_status = conic::SolveStatus::kOptimal;
  double solve_seconds = 0.0;
};

/// Guessing probability and min-entropy of the outcome string for `schedule`
/// applied to `state`, with n <= 3 rounds.
CertificationReport certify(const TwoQubitState& state, const MeasurementSchedule& schedule,
                            const CertifyOptions& options = {});

/// Round functionals and their ideal violations, as used by certify().
std::vector<SteeringFunctional> round_functionals(const TwoQubitState& state,
                                                  const MeasurementSchedule& schedule,
                                                  const CertifyOptions& options,
                                                  std::vector<double>* steering_weights = nullptr);

}  // namespace seqsteer
