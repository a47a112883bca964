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
#include <random>

#include "seqsteer/linalg.hpp"
#include "seqsteer/states.hpp"

namespace seqsteer::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20260101);
  return engine;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline ComplexMatrix random_matrix(Eigen::Index d) {
  std::normal_distribution<double> g;
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = Complex(g(rng()), g(rng()));
  return m;
}

inline ComplexMatrix random_hermitian(Eigen::Index d) { return hermitian_part(random_matrix(d)); }

inline ComplexMatrix random_unitary(Eigen::Index d) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(d));
  return qr.householderQ() * ComplexMatrix::Identity(d, d);
}

/// Random full-rank density matrix of dimension d.
inline ComplexMatrix random_density(Eigen::Index d) {
  const ComplexMatrix g = random_matrix(d);
  const ComplexMatrix rho = g * g.adjoint();
  return hermitian_part(rho / real_trace(rho));
}

inline TwoQubitState random_state() { return TwoQubitState(random_density(4), CustomLabel{"random"}); }

}  // namespace seqsteer::testing
