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

#include "seqsteer/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace seqsteer {

namespace {

constexpr double kTraceTol = 1e-10;
constexpr double kPsdTol = 1e-9;

void validate_density(const ComplexMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw DimensionError("two-qubit state must be 4x4");
  if (!is_hermitian(rho, kHermitianCheckTol)) throw NotHermitianError("state is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > kTraceTol)
    throw std::invalid_argument("state trace differs from one");
  if (!is_psd(rho, kPsdTol)) throw NotHermitianError("state is not positive semidefinite");
}

std::vector<PureComponent> eigen_ensemble(const ComplexMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(rho));
  std::vector<PureComponent> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double w = es.eigenvalues()(i);
    if (w > 1e-15) out.push_back({w, es.eigenvectors().col(i)});
  }
  return out;
}

ComplexMatrix ensemble_density(const std::vector<PureComponent>& ensemble) {
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (const auto& c : ensemble) {
    if (c.amplitudes.size() != 4) throw DimensionError("ensemble component must have 4 amplitudes");
    if (c.weight < 0.0) throw NegativeWeightError("ensemble weight is negative");
    rho += c.weight * outer(c.amplitudes);
  }
  return rho;
}

}  // namespace

ComplexVector bell_vector(Bell which) {
  const double s = 1.0 / std::numbers::sqrt2;
  ComplexVector v = ComplexVector::Zero(4);
  switch (which) {
    case Bell::kPhiPlus: v(0) = s; v(3) = s; break;
    case Bell::kPhiMinus: v(0) = s; v(3) = -s; break;
    case Bell::kPsiPlus: v(1) = s; v(2) = s; break;
    case Bell::kPsiMinus: v(1) = s; v(2) = -s; break;
  }
  return v;
}

ComplexMatrix bell_projector(Bell which) { return outer(bell_vector(which)); }

std::string describe(const StateLabel& label) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, PureLabel>) {
          os << "pure(zeta=" << l.zeta << ")";
        } else if constexpr (std::is_same_v<T, IonTrapLabel>) {
          os << "ion_trap(epsilon=" << l.epsilon << ", round=" << l.purification_round << ")";
        } else {
          os << l.name;
        }
      },
      label);
  return os.str();
}

TwoQubitState::TwoQubitState(ComplexMatrix rho, StateLabel label)
    : rho_(std::move(rho)), label_(std::move(label)) {
  validate_density(rho_);
  rho_ = hermitian_part(rho_);
  ensemble_ = eigen_ensemble(rho_);
}

TwoQubitState::TwoQubitState(std::vector<PureComponent> ensemble, StateLabel label)
    : rho_(ensemble_density(ensemble)), label_(std::move(label)), ensemble_(std::move(ensemble)) {
  validate_density(rho_);
}

TwoQubitState pure_state(double zeta) {
  if (!(zeta >= 0.0 && zeta <= std::numbers::pi / 4 + 1e-15)) {
    throw std::out_of_range("pure_state: zeta must lie in [0, pi/4]");
  }
  ComplexVector psi = ComplexVector::Zero(4);
  psi(0) = std::cos(zeta);
  psi(3) = std::sin(zeta);
  return TwoQubitState({{1.0, psi}}, PureLabel{zeta});
}

std::array<double, 4> ion_trap_weights(double epsilon, int round) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::out_of_range("ion_trap_state: epsilon must lie in [0, 1]");
  }
  const double e = epsilon;
  const double e2 = e * e;
  const double e3 = e2 * e;
  switch (round) {
    case 0:
      return {1.0 - e, e / 3.0, e / 3.0, e / 3.0};
    case 1:
      return {1.0 - 2.0 / 3.0 * e - 2.0 / 3.0 * e2, 2.0 / 9.0 * e + 2.0 / 9.0 * e2, 2.0 / 9.0 * e2,
              2.0 / 9.0 * e2};
    case 2:
      return {1.0 - 8.0 / 9.0 * e2 - 8.0 / 27.0 * e3, 4.0 / 9.0 * e2, 4.0 / 9.0 * e2,
              8.0 / 27.0 * e3};
    case 3:
      return {1.0 - 2.0 / 9.0 * e2 - 16.0 / 27.0 * e3, 2.0 / 9.0 * e2, 8.0 / 27.0 * e3,
              8.0 / 27.0 * e3};
    default:
      throw std::out_of_range("ion_trap_state: purification round must be 0, 1, 2 or 3");
  }
}

TwoQubitState ion_trap_state(double epsilon, int round) {
  auto w = ion_trap_weights(epsilon, round);
  double total = 0.0;
  for (double x : w) {
    if (x < 0.0) {
      throw NegativeWeightError("ion_trap_state: epsilon too large for purification round " +
                                std::to_string(round));
    }
    total += x;
  }
  for (double& x : w) x /= total;
  return bell_diagonal_state(w, IonTrapLabel{epsilon, round});
}

TwoQubitState bell_diagonal_state(const std::array<double, 4>& weights, StateLabel label) {
  std::vector<PureComponent> ensemble;
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (weights[i] < 0.0) throw NegativeWeightError("Bell weight is negative");
    total += weights[i];
    if (weights[i] > 0.0) ensemble.push_back({weights[i], bell_vector(static_cast<Bell>(i))});
  }
  if (std::abs(total - 1.0) > kTraceTol) throw std::invalid_argument("Bell weights must sum to one");
  return TwoQubitState(std::move(ensemble), std::move(label));
}

double fidelity(const ComplexMatrix& rho, const ComplexMatrix& tau) {
  if (rho.rows() != tau.rows() || rho.cols() != tau.cols())
    throw DimensionError("fidelity: dimension mismatch");
  if (!is_psd(rho, kPsdTol) || !is_psd(tau, kPsdTol))
    throw NotHermitianError("fidelity: inputs must be positive semidefinite");
  const ComplexMatrix s = psd_sqrt(rho);
  const ComplexMatrix inner = hermitian_part(s * tau * s);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(inner, Eigen::EigenvaluesOnly);
  double f = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    f += std::sqrt(std::max(es.eigenvalues()(i), 0.0));
  return std::min(f, 1.0);
}

double fidelity(const TwoQubitState& state, const TwoQubitState& target) {
  return fidelity(state.rho(), target.rho());
}

}  // namespace seqsteer
