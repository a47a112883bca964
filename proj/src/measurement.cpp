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

#include "seqsteer/measurement.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace seqsteer {

namespace {

constexpr int kMaxBits = 16;

void check_angle(double angle) {
  if (!(angle >= 0.0 && angle <= std::numbers::pi / 4 + 1e-15)) {
    throw std::out_of_range("measurement angle must lie in [0, pi/4], got " + std::to_string(angle));
  }
}

}  // namespace

int BitString::at(int round) const {
  if (round < 0 || round >= length) throw std::out_of_range("BitString::at: round out of range");
  return static_cast<int>((bits >> (length - 1 - round)) & 1u);
}

BitString BitString::prefix(int len) const {
  if (len < 0 || len > length) throw std::out_of_range("BitString::prefix: bad length");
  return {bits >> (length - len), len};
}

BitString BitString::append(int bit) const {
  if (length >= kMaxBits) throw std::length_error("BitString too long");
  return {(bits << 1) | static_cast<std::uint32_t>(bit & 1), length + 1};
}

std::string BitString::str() const {
  std::string s(static_cast<std::size_t>(length), '0');
  for (int i = 0; i < length; ++i) s[static_cast<std::size_t>(i)] = at(i) ? '1' : '0';
  return s;
}

BitString BitString::parse(std::string_view text) {
  if (text.size() > kMaxBits) throw std::length_error("BitString too long");
  BitString out;
  for (char c : text) {
    if (c != '0' && c != '1') throw std::invalid_argument("BitString: expected only '0'/'1'");
    out = out.append(c == '1');
  }
  return out;
}

std::vector<BitString> BitString::all(int length) {
  std::vector<BitString> out;
  out.reserve(std::size_t{1} << length);
  for (std::uint32_t v = 0; v < (1u << length); ++v) out.push_back({v, length});
  return out;
}

KrausOp kraus(Basis basis, double angle, Outcome outcome) {
  check_angle(angle);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  ComplexMatrix m(2, 2);
  if (basis == Basis::kZ) {
    // cos|0><0| + sin|1><1| for +1, roles swapped for -1
    const bool plus = outcome == Outcome::kPlus;
    m << (plus ? c : s), 0.0, 0.0, (plus ? s : c);
  } else {
    // |+><+| = [[1,1],[1,1]]/2, |-><-| = [[1,-1],[-1,1]]/2
    const double on = outcome == Outcome::kPlus ? 1.0 : -1.0;
    const double diag = 0.5 * (c + s);
    const double off = 0.5 * on * (c - s);
    m << diag, off, off, diag;
  }
  return {basis, angle, outcome, m};
}

ComplexMatrix povm_element(const KrausOp& k) { return k.matrix.adjoint() * k.matrix; }

MeasurementSchedule::MeasurementSchedule(std::vector<double> thetas, std::vector<double> phis,
                                         BitString y_star)
    : thetas_(std::move(thetas)), phis_(std::move(phis)), y_star_(y_star) {
  if (thetas_.empty()) throw std::invalid_argument("schedule needs at least one round");
  if (thetas_.size() != phis_.size())
    throw std::invalid_argument("schedule: thetas and phis must have one entry per round");
  if (y_star_.length != n_rounds())
    throw std::invalid_argument("schedule: target input string length must equal round count");
  for (double a : thetas_) check_angle(a);
  for (double a : phis_) check_angle(a);
}

bool MeasurementSchedule::final_round_projective() const {
  return thetas_.back() == 0.0 && phis_.back() == 0.0;
}

bool MeasurementSchedule::is_protocol_form() const {
  return final_round_projective() && y_star_.at(0) == 1;
}

Assemblage::Assemblage(int round, std::vector<ComplexMatrix> elements)
    : round_(round), elements_(std::move(elements)) {
  if (round_ < 1 || round_ > 8) throw std::out_of_range("Assemblage: unsupported round count");
  if (elements_.size() != (std::size_t{1} << (2 * round_)))
    throw DimensionError("Assemblage: expected 4^k elements");
  for (const auto& e : elements_)
    if (e.rows() != 2 || e.cols() != 2) throw DimensionError("Assemblage: elements must be 2x2");
}

const ComplexMatrix& Assemblage::operator()(const BitString& b, const BitString& y) const {
  if (b.length != round_ || y.length != round_)
    throw std::invalid_argument("Assemblage: string length does not match round");
  return at(b.bits, y.bits);
}

double Assemblage::probability(const BitString& b, const BitString& y) const {
  return real_trace((*this)(b, y));
}

ComplexMatrix Assemblage::marginal(std::uint32_t y) const {
  ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
  for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(strings()); ++b) sum += at(b, y);
  return sum;
}

ComplexMatrix sequence_kraus(const MeasurementSchedule& schedule, const BitString& b,
                             const BitString& y) {
  ComplexMatrix k = identity(2);
  for (int j = 0; j < b.length; ++j) {
    const int input = y.at(j);
    const auto op = kraus(input == 1 ? Basis::kX : Basis::kZ, schedule.angle(j, input),
                          static_cast<Outcome>(b.at(j)));
    k = op.matrix * k;
  }
  return k;
}

Assemblage build_assemblage(const TwoQubitState& state, const MeasurementSchedule& schedule,
                            int k) {
  if (k < 1 || k > schedule.n_rounds()) {
    throw std::invalid_argument("build_assemblage: round count " + std::to_string(k) +
                                " outside schedule of " + std::to_string(schedule.n_rounds()));
  }
  const ComplexMatrix id2 = identity(2);
  std::vector<ComplexMatrix> elements(std::size_t{1} << (2 * k));
  for (const auto& b : BitString::all(k)) {
    for (const auto& y : BitString::all(k)) {
      const ComplexMatrix op = kron(id2, sequence_kraus(schedule, b, y));
      const ComplexMatrix post = op * state.rho() * op.adjoint();
      elements[(static_cast<std::size_t>(b.bits) << k) | y.bits] =
          hermitian_part(partial_trace(post, {2, 2}, Subsystem::kA));
    }
  }
  return Assemblage(k, std::move(elements));
}

ComplexMatrix reduced_alice(const TwoQubitState& state) {
  return hermitian_part(partial_trace(state.rho(), {2, 2}, Subsystem::kA));
}

}  // namespace seqsteer
