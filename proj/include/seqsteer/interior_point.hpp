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

#include "seqsteer/conic.hpp"

namespace seqsteer::conic {

/// Infeasible-start primal-dual path-following SDP solver (HKM search direction,
/// Mehrotra predictor-corrector) working directly on complex Hermitian blocks.
///
/// The problem is brought into standard form
///     min <C, X>  s.t.  <A_i, X> = b_i,  X = diag(X_1, ..., X_p) >= 0
/// with one block per variable and one slack block per PSD constraint. Matrix
/// equalities contribute one row per element of an orthonormal Hermitian basis.
/// Linearly dependent rows are dropped before iterating; if a dropped row is not
/// implied by the kept ones the problem is reported infeasible.
class InteriorPointSolver final : public SolverAdapter {
 public:
  Solution solve(const ConicProblem& problem, const SolverOptions& options) const override;
};

/// Orthonormal basis of d x d Hermitian matrices under Re tr(AB).
std::vector<ComplexMatrix> hermitian_basis(Eigen::Index d);

}  // namespace seqsteer::conic
