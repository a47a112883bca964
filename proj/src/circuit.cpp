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

#include "seqsteer/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace seqsteer::circuit {

namespace {

constexpr double kNormTol = 1e-12;

ComplexVector basis_state(int n_qubits) {
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << n_qubits);
  v(0) = 1.0;
  return v;
}

std::size_t bit_mask(int n_qubits, int qubit) { return std::size_t{1} << (n_qubits - 1 - qubit); }

StateVector controlled_gate(int ancilla, int target, double angle, const ComplexMatrix& u,
                            const StateVector& sv) {
  if (ancilla == target) throw std::invalid_argument("gate: ancilla and target must differ");
  StateVector out = sv.apply(ancilla, ry(2.0 * angle));
  out = out.apply(ancilla, hadamard());
  out = out.apply_controlled(ancilla, target, u);
  return out.apply(ancilla, hadamard());
}

/// Alice's unnormalized state from a register whose last two qubits are Alice and
/// Bob, after projecting every other qubit onto the bits of `rest`.
ComplexMatrix alice_block(const ComplexVector& amps, std::size_t rest) {
  ComplexVector ab(4);
  for (std::size_t j = 0; j < 4; ++j) ab(static_cast<Eigen::Index>(j)) = amps(static_cast<Eigen::Index>((rest << 2) | j));
  return hermitian_part(partial_trace(outer(ab), {2, 2}, Subsystem::kA));
}

/// Joint pure state of the given ancillas in |0>, Alice and Bob.
StateVector prepare(int n_ancillas, const ComplexVector& psi_ab) {
  ComplexVector amps = ComplexVector::Zero(Eigen::Index{4} << n_ancillas);
  amps.head(4) = psi_ab;
  return StateVector(n_ancillas + 2, amps);
}

StateVector round_gate(const MeasurementSchedule& schedule, int round, int input, int ancilla, int bob,
                       const StateVector& sv) {
  const double angle = schedule.angle(round, input);
  return input == 1 ? gate_xtheta(ancilla, bob, angle, sv) : gate_zphi(ancilla, bob, angle, sv);
}

}  // namespace

StateVector::StateVector(int n_qubits) : StateVector(n_qubits, basis_state(n_qubits)) {}

StateVector::StateVector(int n_qubits, ComplexVector amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  if (n_qubits < 1 || n_qubits > 20) throw std::invalid_argument("StateVector: qubit count out of range");
  if (amplitudes_.size() != (Eigen::Index{1} << n_qubits))
    throw std::invalid_argument("StateVector: amplitude count must be 2^n");
  if (std::abs(amplitudes_.norm() - 1.0) > kNormTol)
    throw std::invalid_argument("StateVector: amplitudes must have unit norm");
}

void StateVector::check_qubit(int q) const {
  if (q < 0 || q >= n_qubits_)
    throw std::out_of_range("StateVector: qubit " + std::to_string(q) + " out of range");
}

double StateVector::probability(int qubit, int bit) const {
  check_qubit(qubit);
  const auto mask = bit_mask(n_qubits_, qubit);
  double p = 0.0;
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i)
    if (((static_cast<std::size_t>(i) & mask) != 0) == (bit == 1)) p += std::norm(amplitudes_(i));
  return p;
}

StateVector StateVector::apply(int qubit, const ComplexMatrix& u) const {
  check_qubit(qubit);
  const auto mask = bit_mask(n_qubits_, qubit);
  ComplexVector out = amplitudes_;
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (idx & mask) continue;
    const auto j = static_cast<Eigen::Index>(idx | mask);
    out(i) = u(0, 0) * amplitudes_(i) + u(0, 1) * amplitudes_(j);
    out(j) = u(1, 0) * amplitudes_(i) + u(1, 1) * amplitudes_(j);
  }
  return StateVector(n_qubits_, std::move(out));
}

StateVector StateVector::apply_controlled(int control, int target, const ComplexMatrix& u) const {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw std::invalid_argument("StateVector: control and target must differ");
  const auto cmask = bit_mask(n_qubits_, control);
  const auto tmask = bit_mask(n_qubits_, target);
  ComplexVector out = amplitudes_;
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (!(idx & cmask) || (idx & tmask)) continue;
    const auto j = static_cast<Eigen::Index>(idx | tmask);
    out(i) = u(0, 0) * amplitudes_(i) + u(0, 1) * amplitudes_(j);
    out(j) = u(1, 0) * amplitudes_(i) + u(1, 1) * amplitudes_(j);
  }
  return StateVector(n_qubits_, std::move(out));
}

std::pair<StateVector, double> StateVector::measure(int qubit, int bit) const {
  const double p = probability(qubit, bit);
  if (!(p > 0.0)) throw std::domain_error("StateVector: measurement outcome has zero probability");
  const auto mask = bit_mask(n_qubits_, qubit);
  ComplexVector out = amplitudes_;
  for (Eigen::Index i = 0; i < out.size(); ++i)
    if (((static_cast<std::size_t>(i) & mask) != 0) != (bit == 1)) out(i) = 0.0;
  out /= std::sqrt(p);
  out.normalize();
  return {StateVector(n_qubits_, std::move(out)), p};
}

ComplexMatrix hadamard() {
  ComplexMatrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

ComplexMatrix pauli_x() {
  ComplexMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  return x;
}

ComplexMatrix pauli_z() {
  ComplexMatrix z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  return z;
}

ComplexMatrix ry(double t) {
  const double c = std::cos(t / 2.0);
  const double s = std::sin(t / 2.0);
  ComplexMatrix r(2, 2);
  r << c, -s, s, c;
  return r;
}

StateVector gate_xtheta(int ancilla, int target, double theta, const StateVector& sv) {
  return controlled_gate(ancilla, target, theta, pauli_x(), sv);
}

StateVector gate_zphi(int ancilla, int target, double phi, const StateVector& sv) {
  return controlled_gate(ancilla, target, phi, pauli_z(), sv);
}

std::vector<Branch> simulate_protocol(const TwoQubitState& state, const MeasurementSchedule& schedule,
                                      const BitString& y, AncillaMode mode) {
  const int n = y.length;
  if (n < 1 || n > schedule.n_rounds()) {
    throw std::invalid_argument("simulate_protocol: input string of length " + std::to_string(n) +
                                " does not fit a schedule of " + std::to_string(schedule.n_rounds()) +
                                " rounds");
  }
  const std::size_t n_out = std::size_t{1} << n;
  std::vector<ComplexMatrix> sigma(n_out, ComplexMatrix::Zero(2, 2));

  for (const auto& comp : state.ensemble()) {
    if (mode == AncillaMode::kDeferred) {
      // Registers: ancillas 0..n-1, Alice n, Bob n+1.
      StateVector sv = prepare(n, comp.amplitudes);
      for (int r = 0; r < n; ++r) sv = round_gate(schedule, r, y.at(r), r, n + 1, sv);
      for (std::size_t b = 0; b < n_out; ++b)
        sigma[b] += comp.weight * alice_block(sv.amplitudes(), b);
      continue;
    }

    // Expand measurement records round by round; each leaf carries its probability.
    const bool single = mode == AncillaMode::kSingleReset;
    const int n_anc = single ? 1 : n;
    struct Node {
      StateVector sv;
      std::uint32_t record;
      double p;
    };
    std::vector<Node> frontier{{prepare(n_anc, comp.amplitudes), 0, 1.0}};
    for (int r = 0; r < n; ++r) {
      const int anc = single ? 0 : r;
      std::vector<Node> next;
      for (const auto& node : frontier) {
        const StateVector after = round_gate(schedule, r, y.at(r), anc, n_anc + 1, node.sv);
        for (int bit = 0; bit < 2; ++bit) {
          if (!(after.probability(anc, bit) > 0.0)) continue;
          auto [post, p] = after.measure(anc, bit);
          if (single && bit == 1) post = post.apply(anc, pauli_x());
          next.push_back({std::move(post), (node.record << 1) | static_cast<std::uint32_t>(bit), node.p * p});
        }
      }
      frontier = std::move(next);
    }
    for (const auto& leaf : frontier) {
      // Ancillas now hold the record (or |0> after a reset); read Alice and Bob.
      const std::size_t rest = single ? 0 : leaf.record;
      sigma[leaf.record] += comp.weight * leaf.p * alice_block(leaf.sv.amplitudes(), rest);
    }
  }

  std::vector<Branch> out;
  out.reserve(n_out);
  for (std::size_t b = 0; b < n_out; ++b) {
    Branch br;
    br.outcomes = BitString{static_cast<std::uint32_t>(b), n};
    br.probability = real_trace(sigma[b]);
    br.alice = br.probability > 0.0 ? ComplexMatrix(sigma[b] / br.probability) : ComplexMatrix::Zero(2, 2);
    out.push_back(std::move(br));
  }
  return out;
}

Assemblage circuit_assemblage(const TwoQubitState& state, const MeasurementSchedule& schedule, int k,
                              AncillaMode mode) {
  if (k < 1 || k > schedule.n_rounds())
    throw std::invalid_argument("circuit_assemblage: round count outside schedule");
  std::vector<ComplexMatrix> elements(std::size_t{1} << (2 * k));
  for (const auto& y : BitString::all(k)) {
    for (const auto& br : simulate_protocol(state, schedule, y, mode))
      elements[(static_cast<std::size_t>(br.outcomes.bits) << k) | y.bits] = br.unnormalized();
  }
  return Assemblage(k, std::move(elements));
}

OracleReport oracle_check(int cases, std::uint64_t seed) {
  if (cases < 1) throw std::invalid_argument("oracle_check: need at least one case");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit;
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 4);
  std::uniform_int_distribution<int> rounds(1, 3);
  std::uniform_int_distribution<int> components(1, 3);
  const AncillaMode modes[] = {AncillaMode::kDeferred, AncillaMode::kImmediate, AncillaMode::kSingleReset};

  OracleReport out;
  out.cases = cases;
  for (int c = 0; c < cases; ++c) {
    std::vector<PureComponent> ensemble;
    const int m = components(rng);
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
      ComplexVector v(4);
      for (Eigen::Index j = 0; j < 4; ++j) v(j) = Complex(gauss(rng), gauss(rng));
      const double w = unit(rng) + 1e-3;
      ensemble.push_back({w, v.normalized()});
      total += w;
    }
    for (auto& e : ensemble) e.weight /= total;
    const TwoQubitState state(std::move(ensemble), CustomLabel{"random"});

    const int n = rounds(rng);
    std::vector<double> thetas(static_cast<std::size_t>(n));
    std::vector<double> phis(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
      thetas[static_cast<std::size_t>(r)] = angle(rng);
      phis[static_cast<std::size_t>(r)] = angle(rng);
    }
    const BitString y{static_cast<std::uint32_t>(rng() % (1u << n)), n};
    const MeasurementSchedule schedule(thetas, phis, y);
    const Assemblage kraus = build_assemblage(state, schedule, n);

    for (const auto& br : simulate_protocol(state, schedule, y, modes[c % 3])) {
      const ComplexMatrix& sigma = kraus.at(br.outcomes.bits, y.bits);
      const double p = real_trace(sigma);
      out.max_probability_deviation = std::max(out.max_probability_deviation, std::abs(p - br.probability));
      if (p > 0.0 && br.probability > 0.0)
        out.max_state_deviation = std::max(out.max_state_deviation, (sigma / p - br.alice).norm());
    }
  }
  return out;
}

}  // namespace seqsteer::circuit
