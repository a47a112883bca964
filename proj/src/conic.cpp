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

#include "seqsteer/conic.hpp"

#include <algorithm>
#include <stdexcept>

namespace seqsteer::conic {

MatrixExpr::MatrixExpr(Eigen::Index dim) : dim_(dim), constant_(ComplexMatrix::Zero(dim, dim)) {}

MatrixExpr::MatrixExpr(Var v, Eigen::Index dim, double coef) : MatrixExpr(dim) { add(v, coef); }

MatrixExpr& MatrixExpr::add(Var v, double coef) {
  terms_.emplace_back(v.index, coef);
  return *this;
}

MatrixExpr& MatrixExpr::add_constant(const ComplexMatrix& m) {
  if (m.rows() != dim_ || m.cols() != dim_) throw DimensionError("MatrixExpr: constant has wrong size");
  constant_ += m;
  return *this;
}

ScalarExpr& ScalarExpr::add(Var v, const ComplexMatrix& weight) {
  terms_.emplace_back(v.index, weight);
  return *this;
}

ScalarExpr& ScalarExpr::add_trace(Var v, Eigen::Index dim, double coef) {
  return add(v, coef * identity(dim));
}

ScalarExpr& ScalarExpr::add_constant(double c) {
  constant_ += c;
  return *this;
}

Var ConicProblem::add_variable(Eigen::Index dim, std::string name) {
  if (dim <= 0) throw std::invalid_argument("ConicProblem: variable dimension must be positive");
  var_dims_.push_back(dim);
  var_names_.push_back(std::move(name));
  return Var{static_cast<int>(var_dims_.size()) - 1};
}

void ConicProblem::set_objective(ScalarExpr objective, Sense sense) {
  check_scalar_expr(objective);
  objective_ = std::move(objective);
  sense_ = sense;
}

int ConicProblem::add_equality(ScalarExpr lhs, double rhs, std::string name) {
  check_scalar_expr(lhs);
  scalar_eqs_.push_back({std::move(lhs), rhs, std::move(name)});
  return static_cast<int>(scalar_eqs_.size()) - 1;
}

int ConicProblem::add_equality(MatrixExpr lhs, ComplexMatrix rhs, std::string name) {
  check_matrix_expr(lhs);
  if (rhs.rows() != lhs.dim() || rhs.cols() != lhs.dim())
    throw std::invalid_argument("ConicProblem: equality right-hand side has wrong size");
  if (!is_hermitian(rhs, kHermitianCheckTol))
    throw std::invalid_argument("ConicProblem: equality right-hand side must be Hermitian");
  matrix_eqs_.push_back({std::move(lhs), std::move(rhs), std::move(name)});
  return static_cast<int>(matrix_eqs_.size()) - 1;
}

int ConicProblem::add_psd(MatrixExpr expr, std::string name) {
  check_matrix_expr(expr);
  psd_.push_back({std::move(expr), std::move(name)});
  return static_cast<int>(psd_.size()) - 1;
}

void ConicProblem::check_matrix_expr(const MatrixExpr& e) const {
  for (const auto& [idx, coef] : e.terms()) {
    if (idx < 0 || idx >= num_variables())
      throw std::invalid_argument("ConicProblem: expression references an undeclared variable");
    if (var_dims_[static_cast<std::size_t>(idx)] != e.dim())
      throw std::invalid_argument("ConicProblem: matrix expression mixes dimensions");
  }
  if (!is_hermitian(e.constant(), kHermitianCheckTol))
    throw std::invalid_argument("ConicProblem: expression constant must be Hermitian");
}

void ConicProblem::check_scalar_expr(const ScalarExpr& e) const {
  for (const auto& [idx, w] : e.terms()) {
    if (idx < 0 || idx >= num_variables())
      throw std::invalid_argument("ConicProblem: expression references an undeclared variable");
    const auto d = var_dims_[static_cast<std::size_t>(idx)];
    if (w.rows() != d || w.cols() != d)
      throw std::invalid_argument("ConicProblem: scalar weight has wrong size");
    if (!is_hermitian(w, kHermitianCheckTol))
      throw std::invalid_argument("ConicProblem: scalar weight must be Hermitian");
  }
}

void ConicProblem::validate() const {
  check_scalar_expr(objective_);
  for (const auto& eq : scalar_eqs_) check_scalar_expr(eq.lhs);
  for (const auto& eq : matrix_eqs_) check_matrix_expr(eq.lhs);
  for (const auto& c : psd_) check_matrix_expr(c.expr);
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInaccurate: return "inaccurate";
    case SolveStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

double evaluate(const ScalarExpr& e, const std::vector<ComplexMatrix>& values) {
  double out = e.constant();
  for (const auto& [idx, w] : e.terms()) out += trace_inner(w, values[static_cast<std::size_t>(idx)]);
  return out;
}

ComplexMatrix evaluate(const MatrixExpr& e, const std::vector<ComplexMatrix>& values) {
  ComplexMatrix out = e.constant();
  for (const auto& [idx, coef] : e.terms()) out += coef * values[static_cast<std::size_t>(idx)];
  return out;
}

std::pair<double, double> verify(const ConicProblem& problem,
                                 const std::vector<ComplexMatrix>& values) {
  double residual = 0.0;
  for (const auto& eq : problem.scalar_equalities())
    residual = std::max(residual, std::abs(evaluate(eq.lhs, values) - eq.rhs));
  for (const auto& eq : problem.matrix_equalities()) {
    const ComplexMatrix diff = evaluate(eq.lhs, values) - eq.rhs;
    if (diff.size() > 0) residual = std::max(residual, diff.cwiseAbs().maxCoeff());
  }
  double min_eig = INFINITY;
  for (const auto& v : values) min_eig = std::min(min_eig, min_eigenvalue(hermitian_part(v)));
  for (const auto& c : problem.psd_constraints())
    min_eig = std::min(min_eig, min_eigenvalue(hermitian_part(evaluate(c.expr, values))));
  return {residual, min_eig};
}

}  // namespace seqsteer::conic
