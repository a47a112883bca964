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

#include "seqsteer/certifier.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "seqsteer/interior_point.hpp"

namespace seqsteer {

namespace {

using conic::ConicProblem;
using conic::MatrixExpr;
using conic::ScalarExpr;
using conic::SolveStatus;
using conic::Var;

constexpr double kAcceptResidual = 1e-6;
constexpr double kZeroTrace = 1e-12;
constexpr double kFaceTol = 1e-9;
constexpr double kKernelCap = 1e6;
constexpr double kUnsteerable = 1e-7;
constexpr int kMaxCertifyRounds = 3;

int severity(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return 0;
    case SolveStatus::kInaccurate: return 1;
    case SolveStatus::kInfeasible: return 2;
  }
  return 2;
}

bool usable(const conic::Solution& sol) {
  if (sol.status == SolveStatus::kOptimal) return true;
  return sol.status == SolveStatus::kInaccurate && sol.max_equality_residual <= kAcceptResidual &&
         sol.primal_infeasibility <= kAcceptResidual && sol.dual_infeasibility <= kAcceptResidual &&
         sol.relative_gap <= kAcceptResidual;
}

}  // namespace

double pairing(const SteeringFunctional& f, const Assemblage& a) {
  if (f.round != a.round()) throw std::invalid_argument("pairing: round mismatch");
  double v = 0.0;
  const auto n = static_cast<std::uint32_t>(a.strings());
  for (std::uint32_t b = 0; b < n; ++b)
    for (std::uint32_t y = 0; y < n; ++y) v += trace_inner(f.at(b, y), a.at(b, y));
  return v;
}

SteeringWeightResult steering_weight(const Assemblage& assemblage,
                                     const std::vector<DeterministicStrategy>& strategies,
                                     const conic::SolverOptions& options) {
  const int k = assemblage.round();
  const auto n = static_cast<std::uint32_t>(assemblage.strings());
  if (strategies.empty()) throw std::invalid_argument("steering_weight: no strategies");
  for (const auto& s : strategies)
    if (s.round() != k) throw std::invalid_argument("steering_weight: strategy round mismatch");

  // min 1 - sum_l tr sigma_l  s.t.  sigma_{b|y} - sum_l D(b|y,l) sigma_l >= 0, sigma_l >= 0.
  // The multipliers of the first family are the optimal steering inequality F.
  ConicProblem p;
  std::vector<Var> lhs;
  lhs.reserve(strategies.size());
  ScalarExpr obj;
  obj.add_constant(1.0);
  for (std::size_t l = 0; l < strategies.size(); ++l) {
    lhs.push_back(p.add_variable(2));
    obj.add_trace(lhs.back(), 2, -1.0);
  }
  p.set_objective(std::move(obj), conic::Sense::kMinimize);
  for (std::uint32_t b = 0; b < n; ++b) {
    for (std::uint32_t y = 0; y < n; ++y) {
      MatrixExpr e(2);
      e.add_constant(assemblage.at(b, y));
      for (std::size_t l = 0; l < strategies.size(); ++l)
        if (strategies[l].response(y) == b) e.add(lhs[l], -1.0);
      p.add_psd(std::move(e));
    }
  }

  const auto sol = conic::InteriorPointSolver{}.solve(p, options);
  if (!usable(sol)) {
    throw SolverError("steering_weight: solver returned " + conic::to_string(sol.status), sol.status);
  }

  SteeringWeightResult out;
  out.status = sol.status;
  out.lhs_states = sol.values;
  out.functional.round = k;
  out.functional.coefficients.resize(std::size_t{1} << (2 * k));
  for (std::uint32_t b = 0; b < n; ++b)
    for (std::uint32_t y = 0; y < n; ++y)
      out.functional.coefficients[(static_cast<std::size_t>(b) << k) | y] =
          hermitian_part(sol.psd_duals[(static_cast<std::size_t>(b) << k) | y]);

  // On the kernel of a rank-deficient element the multiplier is unbounded and
  // the solver leaves it at zero. Add t * P_ker with the least t that keeps the
  // functional as LHS-bounded as the limit t -> infinity allows.
  std::vector<ComplexMatrix> kernels(out.functional.coefficients.size());
  bool any_kernel = false;
  for (std::uint32_t b = 0; b < n; ++b) {
    for (std::uint32_t y = 0; y < n; ++y) {
      const auto idx = (static_cast<std::size_t>(b) << k) | y;
      const ComplexMatrix& s = assemblage.at(b, y);
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(s));
      const double cut = kFaceTol * std::max(1.0, s.norm());
      kernels[idx] = ComplexMatrix::Zero(2, 2);
      for (Eigen::Index i = 0; i < 2; ++i) {
        if (std::abs(es.eigenvalues()(i)) <= cut) {
          kernels[idx] += outer(es.eigenvectors().col(i));
          any_kernel = true;
        }
      }
    }
  }
  auto bound = [&](double t) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& s : strategies) {
      ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
      for (std::uint32_t y = 0; y < n; ++y) {
        const auto idx = (static_cast<std::size_t>(s.response(y)) << k) | y;
        sum += out.functional.coefficients[idx] + t * kernels[idx];
      }
      worst = std::min(worst, min_eigenvalue(hermitian_part(sum)));
    }
    return worst;
  };
  if (any_kernel) {
    const double target = std::min(1.0, bound(kKernelCap)) - 1e-9;
    double lo = 0.0;
    double hi = kKernelCap;
    if (bound(lo) < target) {
      for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (bound(mid) >= target ? hi : lo) = mid;
      }
      for (std::size_t i = 0; i < kernels.size(); ++i) out.functional.coefficients[i] += hi * kernels[i];
    }
  }

  // Restore exact LHS-boundedness lost to the interior iterate's dual residual:
  // scale F so that min_l lambda_min(sum D F) = 1.
  const double worst = bound(0.0);
  if (worst > 0.0 && worst < 1.0) {
    for (auto& f : out.functional.coefficients) f /= worst;
  }
  out.functional.violation = pairing(out.functional, assemblage);
  out.steering_weight = std::clamp(sol.objective, 0.0, 1.0);

  // An unsteerable assemblage only admits inequalities it saturates; the
  // solver's version differs from F = 1 / 2^k by noise that would otherwise
  // act as a spurious constraint on the adversary.
  if (out.steering_weight <= kUnsteerable) {
    for (auto& f : out.functional.coefficients) f = identity(2) / static_cast<double>(n);
    out.functional.violation = pairing(out.functional, assemblage);
    out.steering_weight = 0.0;
  }
  // Zero violation forces F_{b|y} sigma_{b|y} = 0 element by element, so the
  // solver's residue on the support of sigma is noise; compress it away.
  if (out.functional.violation <= kUnsteerable) {
    for (std::size_t i = 0; i < kernels.size(); ++i)
      out.functional.coefficients[i] = hermitian_part(kernels[i] * out.functional.coefficients[i] * kernels[i]);
    const double b = bound(0.0);
    if (b > 0.0) {
      for (auto& f : out.functional.coefficients) f /= b;
    }
    out.functional.violation = pairing(out.functional, assemblage);
  }
  if (std::abs(out.steering_weight - (1.0 - out.functional.violation)) > kAcceptResidual)
    out.status = SolveStatus::kInaccurate;
  return out;
}

SteeringFunctional projective_functional(const Assemblage& assemblage, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("projective_functional: alpha must be positive");
  SteeringFunctional f;
  f.round = assemblage.round();
  f.alpha = alpha;
  const auto n = static_cast<std::uint32_t>(assemblage.strings());
  f.coefficients.resize(std::size_t{1} << (2 * f.round));
  for (std::uint32_t b = 0; b < n; ++b) {
    for (std::uint32_t y = 0; y < n; ++y) {
      const ComplexMatrix& s = assemblage.at(b, y);
      const double tr = real_trace(s);
      if (!(tr > kZeroTrace)) {
        throw ZeroTraceError("projective_functional: element b=" + BitString{b, f.round}.str() +
                             " y=" + BitString{y, f.round}.str() + " has zero trace");
      }
      f.coefficients[(static_cast<std::size_t>(b) << f.round) | y] =
          alpha * hermitian_part(identity(2) - s / tr);
    }
  }
  f.violation = pairing(f, assemblage);
  return f;
}

SteeringFunctional projective_functional_lenient(const Assemblage& assemblage, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("projective_functional: alpha must be positive");
  SteeringFunctional f;
  f.round = assemblage.round();
  f.alpha = alpha;
  const auto n = static_cast<std::uint32_t>(assemblage.strings());
  f.coefficients.resize(std::size_t{1} << (2 * f.round));
  for (std::uint32_t b = 0; b < n; ++b) {
    for (std::uint32_t y = 0; y < n; ++y) {
      const ComplexMatrix& s = assemblage.at(b, y);
      const double tr = real_trace(s);
      f.coefficients[(static_cast<std::size_t>(b) << f.round) | y] =
          tr > kZeroTrace ? ComplexMatrix(alpha * hermitian_part(identity(2) - s / tr))
                          : ComplexMatrix(alpha * identity(2));
    }
  }
  f.violation = pairing(f, assemblage);
  return f;
}

ConicProblem guessing_problem(const std::vector<SteeringFunctional>& functionals,
                              const ComplexMatrix& rho_a, const BitString& y_star,
                              const BitString& guess, bool relax_violation) {
  const int n = static_cast<int>(functionals.size());
  if (n < 1) throw std::invalid_argument("guessing_problem: need at least one round");
  if (y_star.length != n || guess.length != n)
    throw std::invalid_argument("guessing_problem: input/guess string length must equal round count");
  for (int k = 1; k <= n; ++k)
    if (functionals[static_cast<std::size_t>(k - 1)].round != k)
      throw std::invalid_argument("guessing_problem: functionals must be ordered by round");

  ConicProblem p;
  // eve[k-1][(b << k) | y]
  std::vector<std::vector<Var>> eve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    auto& vars = eve[static_cast<std::size_t>(k - 1)];
    const std::uint32_t s = 1u << k;
    vars.resize(std::size_t{1} << (2 * k));
    for (std::uint32_t b = 0; b < s; ++b)
      for (std::uint32_t y = 0; y < s; ++y)
        vars[(static_cast<std::size_t>(b) << k) | y] =
            p.add_variable(2, "sigma_" + BitString{b, k}.str() + "|" + BitString{y, k}.str());
  }
  auto at = [&eve](int k, std::uint32_t b, std::uint32_t y) {
    return eve[static_cast<std::size_t>(k - 1)][(static_cast<std::size_t>(b) << k) | y];
  };

  ScalarExpr obj;
  obj.add_trace(at(n, guess.bits, y_star.bits), 2);
  p.set_objective(std::move(obj), conic::Sense::kMaximize);

  // Observed violations.
  for (int k = 1; k <= n; ++k) {
    const auto& f = functionals[static_cast<std::size_t>(k - 1)];
    const std::uint32_t s = 1u << k;
    ScalarExpr e;
    for (std::uint32_t b = 0; b < s; ++b)
      for (std::uint32_t y = 0; y < s; ++y) e.add(at(k, b, y), f.at(b, y));
    if (relax_violation) {
      const Var slack = p.add_variable(1, "violation_slack_" + std::to_string(k));
      e.add(slack, identity(1));
    }
    p.add_equality(std::move(e), f.violation, "violation_" + std::to_string(k));
  }

  // Causality: sum_{b_k} sigma_{b b_k | y y_k} = sigma_{b|y} for every y_k; base case rho_A.
  for (std::uint32_t y1 = 0; y1 < 2; ++y1) {
    MatrixExpr e(2);
    for (std::uint32_t b1 = 0; b1 < 2; ++b1) e.add(at(1, b1, y1));
    p.add_equality(std::move(e), rho_a, "base_y" + std::to_string(y1));
  }
  for (int k = 2; k <= n; ++k) {
    const std::uint32_t s = 1u << (k - 1);
    for (std::uint32_t b = 0; b < s; ++b) {
      for (std::uint32_t y = 0; y < s; ++y) {
        for (std::uint32_t yk = 0; yk < 2; ++yk) {
          MatrixExpr e(2);
          for (std::uint32_t bk = 0; bk < 2; ++bk) e.add(at(k, (b << 1) | bk, (y << 1) | yk));
          e.add(at(k - 1, b, y), -1.0);
          p.add_equality(std::move(e), ComplexMatrix::Zero(2, 2), "causality_" + std::to_string(k));
        }
      }
    }
  }

  // No-signalling: sum_b sigma_{b|y} independent of y at every round.
  for (int k = 1; k <= n; ++k) {
    const std::uint32_t s = 1u << k;
    for (std::uint32_t y = 0; y < s; ++y) {
      for (std::uint32_t y2 = y + 1; y2 < s; ++y2) {
        MatrixExpr e(2);
        for (std::uint32_t b = 0; b < s; ++b) {
          e.add(at(k, b, y));
          e.add(at(k, b, y2), -1.0);
        }
        p.add_equality(std::move(e), ComplexMatrix::Zero(2, 2), "no_signalling_" + std::to_string(k));
      }
    }
  }
  return p;
}

GuessResult guessing_probability(const std::vector<SteeringFunctional>& functionals,
                                 const ComplexMatrix& rho_a, const BitString& y_star,
                                 const BitString& guess, const GuessingOptions& options) {
  const auto p = guessing_problem(functionals, rho_a, y_star, guess, options.relax_violation);
  const auto sol = conic::InteriorPointSolver{}.solve(p, options.solver);
  GuessResult out;
  out.status = sol.status;
  if (sol.status == SolveStatus::kInfeasible) {
    throw SolverError("guessing_probability: infeasible (observed violations are inconsistent)",
                      sol.status);
  }
  if (!usable(sol)) {
    throw SolverError("guessing_probability: solver did not converge (gap " + std::to_string(sol.relative_gap) + ")",
                      sol.status);
  }
  out.probability = std::clamp(sol.objective, 0.0, 1.0);
  out.max_residual = sol.max_equality_residual;
  const int n = static_cast<int>(functionals.size());
  std::size_t offset = 0;
  for (int k = 1; k <= n; ++k) {
    const std::size_t count = std::size_t{1} << (2 * k);
    out.eve.emplace_back(sol.values.begin() + static_cast<std::ptrdiff_t>(offset),
                         sol.values.begin() + static_cast<std::ptrdiff_t>(offset + count));
    offset += count;
  }
  return out;
}

double min_entropy(double p_guess) {
  if (!(p_guess > 0.0)) throw std::domain_error("min_entropy: guessing probability must be positive");
  if (p_guess > 1.0 + 1e-9) throw std::domain_error("min_entropy: guessing probability exceeds one");
  return -std::log2(std::min(p_guess, 1.0));
}

std::vector<SteeringFunctional> round_functionals(const TwoQubitState& state,
                                                  const MeasurementSchedule& schedule,
                                                  const CertifyOptions& options,
                                                  std::vector<double>* steering_weights) {
  const int n = schedule.n_rounds();
  std::vector<SteeringFunctional> out;
  if (steering_weights) steering_weights->assign(static_cast<std::size_t>(n), std::nan(""));
  for (int k = 1; k <= n; ++k) {
    const Assemblage a = build_assemblage(state, schedule, k);
    bool explicit_form = false;
    if (k == n) {
      switch (options.final_functional) {
        case FinalFunctional::kAuto: explicit_form = schedule.final_round_projective(); break;
        case FinalFunctional::kProjective: explicit_form = true; break;
        case FinalFunctional::kSteeringWeight: explicit_form = false; break;
      }
    }
    if (explicit_form) {
      out.push_back(projective_functional_lenient(a, options.alpha));
    } else {
      try {
        auto sw = steering_weight(a, enumerate_strategies(k), options.guessing.solver);
        if (steering_weights) (*steering_weights)[static_cast<std::size_t>(k - 1)] = sw.steering_weight;
        out.push_back(std::move(sw.functional));
      } catch (const SolverError& e) {
        throw SolverError("round " + std::to_string(k) + ": " + e.what(), e.status());
      }
    }
  }
  return out;
}

CertificationReport certify(const TwoQubitState& state, const MeasurementSchedule& schedule,
                            const CertifyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const int n = schedule.n_rounds();
  if (n > kMaxCertifyRounds) throw std::out_of_range("certify: at most 3 rounds are supported");

  CertificationReport report;
  const auto functionals = round_functionals(state, schedule, options, &report.steering_weights);
  for (const auto& f : functionals) report.per_round_violations.push_back(f.violation);

  const ComplexMatrix rho_a = reduced_alice(state);
  double best = -1.0;
  int worst = 0;
  for (const auto& guess : BitString::all(n)) {
    GuessResult g;
    try {
      g = guessing_probability(functionals, rho_a, schedule.y_star(), guess, options.guessing);
    } catch (const SolverError& e) {
      throw SolverError("guess " + guess.str() + ": " + e.what(), e.status());
    }
    report.per_guess.push_back(g.probability);
    worst = std::max(worst, severity(g.status));
    if (g.probability > best + 1e-9) {
      best = g.probability;
      report.best_guess = guess;
    }
  }
  report.guessing_probability = std::clamp(best, 0.0, 1.0);
  report.min_entropy_bits = min_entropy(std::max(report.guessing_probability, 1e-300));
  report.solver_status = worst == 0 ? SolveStatus::kOptimal
                         : worst == 1 ? SolveStatus::kInaccurate
                                      : SolveStatus::kInfeasible;
  report.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace seqsteer
