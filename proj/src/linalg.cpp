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

#include "seqsteer/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace seqsteer {

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix outer(const ComplexVector& v) { return v * v.adjoint(); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index br = b.rows();
  const Eigen::Index bc = b.cols();
  ComplexMatrix out(a.rows() * br, a.cols() * bc);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::pair<Eigen::Index, Eigen::Index> dims,
                            Subsystem keep) {
  const auto [da, db] = dims;
  if (da <= 0 || db <= 0 || m.rows() != da * db || m.cols() != da * db) {
    throw DimensionError("partial_trace: matrix of size " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " does not match dims " + std::to_string(da) +
                         "x" + std::to_string(db));
  }
  if (keep == Subsystem::kA) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
      for (Eigen::Index j = 0; j < da; ++j)
        for (Eigen::Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (Eigen::Index k = 0; k < db; ++k)
    for (Eigen::Index l = 0; l < db; ++l)
      for (Eigen::Index i = 0; i < da; ++i) out(k, l) += m(i * db + k, i * db + l);
  return out;
}

double hermitian_deviation(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) { return hermitian_deviation(m) <= tol; }

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

RealVector eigenvalues(const ComplexMatrix& m) {
  if (!is_hermitian(m, kHermitianCheckTol)) {
    throw NotHermitianError("eigenvalues: matrix is not Hermitian (deviation " +
                            std::to_string(hermitian_deviation(m)) + ")");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_eigenvalue(const ComplexMatrix& m) { return eigenvalues(m).minCoeff(); }

bool is_psd(const ComplexMatrix& m, double tol) { return min_eigenvalue(m) >= -tol; }

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  if (!is_hermitian(m, kHermitianCheckTol)) {
    throw NotHermitianError("psd_sqrt: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  RealVector w = es.eigenvalues();
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) < -1e-10) throw NotHermitianError("psd_sqrt: matrix is not positive semidefinite");
    w(i) = std::sqrt(std::max(w(i), 0.0));
  }
  const ComplexMatrix& v = es.eigenvectors();
  return v * w.cast<Complex>().asDiagonal() * v.adjoint();
}

double trace_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  // tr(ab) = sum_ij a_ij b_ji
  return (a.array() * b.transpose().array()).sum().real();
}

double real_trace(const ComplexMatrix& m) { return m.trace().real(); }

}  // namespace seqsteer
