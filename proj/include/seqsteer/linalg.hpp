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

#include <complex>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

namespace seqsteer {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerance applied when a matrix is built to be Hermitian.
inline constexpr double kHermitianBuildTol = 1e-12;
/// Tolerance applied when a caller-supplied matrix is checked for Hermiticity.
inline constexpr double kHermitianCheckTol = 1e-10;

/// Raised when operand dimensions do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operation needs a Hermitian (or PSD) operand and gets something else.
class NotHermitianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Subsystem { kA, kB };

ComplexMatrix identity(Eigen::Index dim);

/// |v><v| for a (not necessarily normalized) column vector.
ComplexMatrix outer(const ComplexVector& v);

/// Tensor product, left factor major: (a ⊗ b)(i*db + k, j*db + l) = a(i,j) b(k,l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced matrix on `keep` of a bipartite operator with local dimensions `dims`.
/// Throws DimensionError when m is not (dims.first*dims.second)-square.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::pair<Eigen::Index, Eigen::Index> dims,
                            Subsystem keep);

/// max_ij |m_ij - conj(m_ji)|; zero for Hermitian matrices.
double hermitian_deviation(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianCheckTol);

/// (m + m^dagger) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Eigenvalues in ascending order. Throws NotHermitianError if m is not Hermitian within 1e-10.
RealVector eigenvalues(const ComplexMatrix& m);

double min_eigenvalue(const ComplexMatrix& m);

bool is_psd(const ComplexMatrix& m, double tol);

/// Principal square root of a PSD matrix. Eigenvalues in [-1e-10, 0) are clipped to zero;
/// anything more negative raises NotHermitianError.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

/// Re tr(a b), the real trace inner product for Hermitian operands.
double trace_inner(const ComplexMatrix& a, const ComplexMatrix& b);

double real_trace(const ComplexMatrix& m);

}  // namespace seqsteer
