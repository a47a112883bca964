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

#include <string>
#include <utility>
#include <vector>

#include "seqsteer/linalg.hpp"

namespace seqsteer::conic {

/// Handle to a Hermitian PSD matrix variable of a ConicProblem.
struct Var {
  int index = -1;
};

/// Real-linear matrix expression: sum_t coef_t * X_{var_t} + constant.
class MatrixExpr {
 public:
  explicit MatrixExpr(Eigen::Index dim);
  MatrixExpr(Var v, Eigen::Index dim, double coef = 1.0);

  Eigen::Index dim() const { return dim_; }
  const std::vector<std::pair<int, double>>& terms() const { return terms_; }
  const ComplexMatrix& constant() const { return constant_; }

  MatrixExpr& add(Var v, double coef = 1.0);
  MatrixExpr& add_constant(const ComplexMatrix& m);

 private:
  Eigen::Index dim_;
  std::vector<std::pair<int, double>> terms_;
  ComplexMatrix constant_;
};

/// Real scalar expression: sum_t Re tr(W_t X_{var_t}) + constant.
class ScalarExpr {
 public:
  ScalarExpr() = default;

  const std::vector<std::pair<int, ComplexMatrix>>& terms() const { return terms_; }
  double constant() const { return constant_; }

  /// Adds Re tr(weight * X_v); weight must be Hermitian.
  ScalarExpr& add(Var v, const ComplexMatrix& weight);
  ScalarExpr& add_trace(Var v, Eigen::Index dim, double coef = 1.0);
  ScalarExpr& add_constant(double c);

 private:
  std::vector<std::pair<int, ComplexMatrix>> terms_;
  double constant_ = 0.0;
};

enum class Sense { kMinimize, kMaximize };

struct ScalarEquality {
  ScalarExpr lhs;
  double rhs;
  std::string name;
};

struct MatrixEquality {
  MatrixExpr lhs;
  ComplexMatrix rhs;
  std::string name;
};

struct PsdConstraint {
  MatrixExpr expr;
  std::string name;
};

/// Solver-agnostic SDP over Hermitian PSD matrix variables.
///
/// Every variable is constrained to the PSD cone of its dimension. Additional
/// linear matrix inequalities are stated with add_psd(); equalities may be scalar
/// or Hermitian-matrix valued.
class ConicProblem {
 public:
  Var add_variable(Eigen::Index dim, std::string name = {});

  void set_objective(ScalarExpr objective, Sense sense);
  int add_equality(ScalarExpr lhs, double rhs, std::string name = {});
  int add_equality(MatrixExpr lhs, ComplexMatrix rhs, std::string name = {});
  int add_psd(MatrixExpr expr, std::string name = {});

  int num_variables() const { return static_cast<int>(var_dims_.size()); }
  Eigen::Index variable_dim(Var v) const { return var_dims_.at(static_cast<std::size_t>(v.index)); }
  const std::vector<Eigen::Index>& variable_dims() const { return var_dims_; }
  const std::vector<std::string>& variable_names() const { return var_names_; }
  const ScalarExpr& objective() const { return objective_; }
  Sense sense() const { return sense_; }
  const std::vector<ScalarEquality>& scalar_equalities() const { return scalar_eqs_; }
  const std::vector<MatrixEquality>& matrix_equalities() const { return matrix_eqs_; }
  const std::vector<PsdConstraint>& psd_constraints() const { return psd_; }

  /// Throws std::invalid_argument on unknown variables or inconsistent dimensions.
  void validate() const;

 private:
  void check_matrix_expr(const MatrixExpr& e) const;
  void check_scalar_expr(const ScalarExpr& e) const;

  std::vector<Eigen::Index> var_dims_;
  std::vector<std::string> var_names_;
  ScalarExpr objective_;
  Sense sense_ = Sense::kMinimize;
  std::vector<ScalarEquality> scalar_eqs_;
  std::vector<MatrixEquality> matrix_eqs_;
  std::vector<PsdConstraint> psd_;
};

enum class SolveStatus { kOptimal, kInaccurate, kInfeasible };

std::string to_string(SolveStatus s);

struct SolverOptions {
  /// Relative primal/dual infeasibility and duality-gap target.
  double tolerance = 1e-8;
  /// Residual level below which an unconverged run is still reported as inaccurate.
  double loose_tolerance = 1e-5;
  int max_iterations = 150;
  bool verbose = false;
};

struct Solution {
  SolveStatus status = SolveStatus::kInaccurate;
  /// Objective in the caller's sense, including the constant term.
  double objective = 0.0;
  /// Value of the dual objective, in the caller's sense.
  double dual_objective = 0.0;
  std::vector<ComplexMatrix> values;
  /// Multipliers in the minimization form of the problem (a maximization is
  /// handled as minimizing the negated objective).
  std::vector<double> scalar_duals;
  std::vector<ComplexMatrix> matrix_duals;
  /// PSD multiplier of each add_psd constraint.
  std::vector<ComplexMatrix> psd_duals;
  int iterations = 0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double relative_gap = 0.0;
  /// Post-hoc checks on the returned point against the original constraints.
  double max_equality_residual = 0.0;
  double min_psd_eigenvalue = 0.0;
};

/// Contract every SDP backend implements.
class SolverAdapter {
 public:
  virtual ~SolverAdapter() = default;
  virtual Solution solve(const ConicProblem& problem, const SolverOptions& options) const = 0;
};

/// Evaluates a scalar expression at the given variable values.
double evaluate(const ScalarExpr& e, const std::vector<ComplexMatrix>& values);
ComplexMatrix evaluate(const MatrixExpr& e, const std::vector<ComplexMatrix>& values);

/// Max absolute equality residual and min eigenvalue over variables and PSD
/// constraints at `values`.
std::pair<double, double> verify(const ConicProblem& problem, const std::vector<ComplexMatrix>& values);

}  // namespace seqsteer::conic
