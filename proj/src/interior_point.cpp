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

#include "seqsteer/interior_point.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace seqsteer::conic {

namespace {

using Eigen::Index;
using RealMatrix = Eigen::MatrixXd;

struct Entry {
  int block;
  ComplexMatrix a;
};

struct Row {
  std::vector<Entry> entries;
  double rhs = 0.0;
};

struct Group {
  std::vector<std::pair<int, double>> terms;
  ComplexMatrix r;
};

/// Standard-form data plus bookkeeping to map results back to the model.
struct StandardForm {
  std::vector<Index> dims;
  std::vector<ComplexMatrix> c;
  double offset = 0.0;
  double sign = 1.0;  // -1 when the caller maximizes
  std::vector<Row> rows;
  int n_user_blocks = 0;
  // Row ranges of each constraint in `rows`.
  std::vector<int> scalar_row;
  std::vector<std::pair<int, Index>> matrix_rows;  // first row, dim
  std::vector<std::pair<int, Index>> psd_rows;
  // Every matrix equality as sum_t coef_t X_t = r, used for facial reduction.
  std::vector<Group> groups;
};

void push_entry(std::map<int, ComplexMatrix>& acc, int block, const ComplexMatrix& a) {
  auto it = acc.find(block);
  if (it == acc.end()) {
    acc.emplace(block, a);
  } else {
    it->second += a;
  }
}

Row make_row(std::map<int, ComplexMatrix>&& acc, double rhs) {
  Row r;
  r.rhs = rhs;
  for (auto& [block, a] : acc) {
    if (a.cwiseAbs().maxCoeff() > 0.0) r.entries.push_back({block, hermitian_part(a)});
  }
  return r;
}

StandardForm compile(const ConicProblem& p) {
  StandardForm sf;
  sf.dims = p.variable_dims();
  sf.n_user_blocks = static_cast<int>(sf.dims.size());
  for (const auto& c : p.psd_constraints()) sf.dims.push_back(c.expr.dim());

  sf.sign = p.sense() == Sense::kMaximize ? -1.0 : 1.0;
  for (Index d : sf.dims) sf.c.push_back(ComplexMatrix::Zero(d, d));
  for (const auto& [idx, w] : p.objective().terms()) sf.c[static_cast<std::size_t>(idx)] += sf.sign * w;
  for (auto& c : sf.c) c = hermitian_part(c);
  sf.offset = p.objective().constant();

  for (const auto& eq : p.scalar_equalities()) {
    std::map<int, ComplexMatrix> acc;
    for (const auto& [idx, w] : eq.lhs.terms()) push_entry(acc, idx, w);
    sf.scalar_row.push_back(static_cast<int>(sf.rows.size()));
    sf.rows.push_back(make_row(std::move(acc), eq.rhs - eq.lhs.constant()));
  }

  auto add_matrix_rows = [&sf](const MatrixExpr& lhs, const ComplexMatrix& rhs, int slack_block) {
    const int first = static_cast<int>(sf.rows.size());
    Group g{lhs.terms(), hermitian_part(rhs - lhs.constant())};
    if (slack_block >= 0) g.terms.emplace_back(slack_block, -1.0);
    sf.groups.push_back(std::move(g));
    for (const auto& e : hermitian_basis(lhs.dim())) {
      std::map<int, ComplexMatrix> acc;
      for (const auto& [idx, coef] : lhs.terms()) push_entry(acc, idx, coef * e);
      if (slack_block >= 0) push_entry(acc, slack_block, -e);
      sf.rows.push_back(make_row(std::move(acc), trace_inner(e, rhs - lhs.constant())));
    }
    return std::make_pair(first, lhs.dim());
  };

  for (const auto& eq : p.matrix_equalities())
    sf.matrix_rows.push_back(add_matrix_rows(eq.lhs, eq.rhs, -1));
  int slack = sf.n_user_blocks;
  for (const auto& c : p.psd_constraints()) {
    const ComplexMatrix zero = ComplexMatrix::Zero(c.expr.dim(), c.expr.dim());
    sf.psd_rows.push_back(add_matrix_rows(c.expr, zero, slack++));
  }
  return sf;
}

constexpr double kFaceTol = 1e-9;
// Right-hand sides below this are treated as exact zeros when looking for faces.
// Iterations without a better residual score before the run is abandoned.
constexpr int kNoProgressLimit = 20;
constexpr double kZeroRhs = 1e-8;

/// Orthonormal basis of the span of the columns of `m`.
ComplexMatrix column_span(const ComplexMatrix& m) {
  if (m.cols() == 0) return ComplexMatrix::Zero(m.rows(), 0);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cut = kFaceTol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Index r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

/// Columns spanning the eigenvectors of Hermitian `m` whose eigenvalues satisfy `keep`.
template <class Keep>
ComplexMatrix eigen_subspace(const ComplexMatrix& m, Keep keep) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  std::vector<Index> cols;
  for (Index i = 0; i < m.rows(); ++i)
    if (keep(es.eigenvalues()(i))) cols.push_back(i);
  ComplexMatrix out(m.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = es.eigenvectors().col(cols[k]);
  return out;
}

/// Part of span(v) inside span(u) (both with orthonormal columns), as columns of v W.
ComplexMatrix intersect(const ComplexMatrix& v, const ComplexMatrix& u) {
  if (v.cols() == 0) return v;
  const ComplexMatrix outside = v - u * (u.adjoint() * v);
  const ComplexMatrix g = outside.adjoint() * outside;
  const ComplexMatrix w = eigen_subspace(g, [](double l) { return l <= kFaceTol; });
  return v * w;
}

/// Faces V_j (orthonormal columns) with X_j = V_j W_j V_j^dagger for every feasible X.
///
/// Two rules are applied until nothing changes. For a matrix equality
/// sum_t c_t X_t = R, the blocks with c_t of one sign have ranges inside
/// range(R) plus the ranges of the blocks on the other side. For a scalar row
/// with zero right-hand side and entries that are all PSD (or all NSD) on the
/// current faces, each block lies in the kernel of its entry.
std::vector<ComplexMatrix> find_faces(const StandardForm& sf) {
  std::vector<ComplexMatrix> v;
  for (Index d : sf.dims) v.push_back(identity(d));
  bool changed = true;
  auto shrink = [&](int block, const ComplexMatrix& nv) {
    auto& cur = v[static_cast<std::size_t>(block)];
    if (nv.cols() < cur.cols()) {
      cur = nv;
      changed = true;
    }
  };
  while (changed) {
    changed = false;
    for (const auto& g : sf.groups) {
      std::map<int, double> coef;
      for (const auto& [b, c] : g.terms) coef[b] += c;
      const double rnorm = g.r.norm();
      const ComplexMatrix r_range =
          eigen_subspace(g.r, [rnorm](double l) { return std::abs(l) > kFaceTol * std::max(1.0, rnorm); });
      for (double side : {1.0, -1.0}) {
        ComplexMatrix span = r_range;
        for (const auto& [b, c] : coef) {
          if (c * side >= 0.0) continue;
          const auto& vb = v[static_cast<std::size_t>(b)];
          ComplexMatrix joined(span.rows(), span.cols() + vb.cols());
          joined << span, vb;
          span = joined;
        }
        const ComplexMatrix u = column_span(span);
        if (u.cols() == u.rows()) continue;
        for (const auto& [b, c] : coef)
          if (c * side > 0.0) shrink(b, intersect(v[static_cast<std::size_t>(b)], u));
      }
    }
    for (const auto& row : sf.rows) {
      if (row.entries.empty()) continue;
      double nrm = 0.0;
      for (const auto& e : row.entries) nrm = std::max(nrm, e.a.norm());
      if (std::abs(row.rhs) > kZeroRhs) continue;
      for (double side : {1.0, -1.0}) {
        bool definite = true;
        for (const auto& e : row.entries) {
          const auto& vb = v[static_cast<std::size_t>(e.block)];
          if (vb.cols() == 0) continue;
          const ComplexMatrix a = side * (vb.adjoint() * e.a * vb);
          if (min_eigenvalue(hermitian_part(a)) < -kFaceTol * nrm) {
            definite = false;
            break;
          }
        }
        if (!definite) continue;
        for (const auto& e : row.entries) {
          const auto& vb = v[static_cast<std::size_t>(e.block)];
          if (vb.cols() == 0) continue;
          const ComplexMatrix a = vb.adjoint() * e.a * vb;
          shrink(e.block, vb * eigen_subspace(a, [nrm](double l) { return std::abs(l) <= kFaceTol * nrm; }));
        }
        break;
      }
    }
  }
  return v;
}

double row_norm(const Row& r) {
  double s = 0.0;
  for (const auto& e : r.entries) s += e.a.squaredNorm();
  return std::sqrt(s);
}

/// Real coordinates of a row in the orthonormal Hermitian basis of every block.
RealMatrix dense_rows(const std::vector<Row>& rows, const std::vector<Index>& dims) {
  std::vector<Index> offset(dims.size() + 1, 0);
  for (std::size_t j = 0; j < dims.size(); ++j) offset[j + 1] = offset[j] + dims[j] * dims[j];
  std::vector<std::vector<ComplexMatrix>> bases;
  for (Index d : dims) bases.push_back(hermitian_basis(d));
  RealMatrix a = RealMatrix::Zero(static_cast<Index>(rows.size()), offset.back());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& e : rows[i].entries) {
      const auto& basis = bases[static_cast<std::size_t>(e.block)];
      for (std::size_t r = 0; r < basis.size(); ++r) {
        a(static_cast<Index>(i), offset[static_cast<std::size_t>(e.block)] + static_cast<Index>(r)) =
            trace_inner(basis[r], e.a);
      }
    }
  }
  return a;
}

ComplexMatrix inverse_pd(const ComplexMatrix& m) {
  Eigen::LLT<ComplexMatrix> llt(m);
  if (llt.info() != Eigen::Success) return hermitian_part(m).inverse();
  return llt.solve(identity(m.rows()));
}

/// Largest t with x + t*dx >= 0, for x positive definite (infinity if unbounded).
double max_step(const ComplexMatrix& x, const ComplexMatrix& dx) {
  Eigen::LLT<ComplexMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const ComplexMatrix linv = llt.matrixL().solve(identity(x.rows()));
  const ComplexMatrix m = hermitian_part(linv * dx * linv.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

struct Iterate {
  std::vector<ComplexMatrix> x;
  std::vector<ComplexMatrix> z;
  RealVector y;
};

double inner(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += trace_inner(a[j], b[j]);
  return s;
}

double frob(const std::vector<ComplexMatrix>& a) {
  double s = 0.0;
  for (const auto& m : a) s += m.squaredNorm();
  return std::sqrt(s);
}

class Engine {
 public:
  Engine(const std::vector<Index>& dims, const std::vector<ComplexMatrix>& c,
         const std::vector<Row>& rows, const SolverOptions& opt)
      : dims_(dims), c_(c), rows_(rows), opt_(opt), m_(static_cast<Index>(rows.size())) {
    by_block_.resize(dims_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t t = 0; t < rows_[i].entries.size(); ++t)
        by_block_[static_cast<std::size_t>(rows_[i].entries[t].block)].push_back(
            {static_cast<int>(i), static_cast<int>(t)});
    b_.resize(m_);
    for (Index i = 0; i < m_; ++i) b_(i) = rows_[static_cast<std::size_t>(i)].rhs;
    n_ = 0;
    for (Index d : dims_) n_ += static_cast<double>(d);
  }

  struct Result {
    Iterate it;
    SolveStatus status;
    int iterations;
    double pinf, dinf, gap;
  };

  Result run() const {
    Iterate it = initial_point();
    const double bnorm = 1.0 + b_.norm();
    const double cnorm = 1.0 + frob(c_);
    Result best{it, SolveStatus::kInaccurate, 0, INFINITY, INFINITY, INFINITY};
    double best_score = INFINITY;
    double prev_pstep = 1.0;
    double prev_dstep = 1.0;
    int stall = 0;
    int since_best = 0;

    for (int iter = 0; iter <= opt_.max_iterations; ++iter) {
      const RealVector rp = b_ - apply_a(it.x);
      std::vector<ComplexMatrix> rd = apply_at(it.y);
      for (std::size_t j = 0; j < rd.size(); ++j) rd[j] = c_[j] - rd[j] - it.z[j];
      const double pobj = inner(c_, it.x);
      const double dobj = b_.dot(it.y);
      const double xz = inner(it.x, it.z);
      const double mu = xz / n_;
      const double pinf = rp.norm() / bnorm;
      const double dinf = frob(rd) / cnorm;
      const double gap = std::max(std::abs(pobj - dobj), std::abs(xz)) /
                         (1.0 + std::abs(pobj) + std::abs(dobj));
      const double score = std::max({pinf, dinf, gap});
      if (opt_.verbose) {
        std::fprintf(stderr, "ipm %3d pobj % .10e dobj % .10e pinf %.2e dinf %.2e gap %.2e\n", iter,
                     pobj, dobj, pinf, dinf, gap);
      }
      if (score < best_score) {
        best_score = score;
        best = {it, SolveStatus::kInaccurate, iter, pinf, dinf, gap};
        since_best = 0;
      } else {
        ++since_best;
      }
      if (score <= opt_.tolerance) {
        best.status = SolveStatus::kOptimal;
        return best;
      }
      if (infeasibility_certificate(it, rd, rp)) {
        return {it, SolveStatus::kInfeasible, iter, pinf, dinf, gap};
      }
      if (iter == opt_.max_iterations || stall >= 8 || since_best >= kNoProgressLimit) break;

      std::vector<ComplexMatrix> zinv(dims_.size());
      for (std::size_t j = 0; j < dims_.size(); ++j) zinv[j] = inverse_pd(it.z[j]);
      const auto schur = factor_schur(it.x, zinv);
      if (!schur) break;

      // Predictor.
      std::vector<ComplexMatrix> dx, dz;
      RealVector dy;
      direction(it, zinv, rd, rp, *schur, 0.0, mu, nullptr, nullptr, dx, dy, dz);
      const double ap = std::min(1.0, step_limit(it.x, dx));
      const double ad = std::min(1.0, step_limit(it.z, dz));
      double mu_aff = 0.0;
      for (std::size_t j = 0; j < dims_.size(); ++j)
        mu_aff += trace_inner(it.x[j] + ap * dx[j], it.z[j] + ad * dz[j]);
      mu_aff /= n_;
      double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
      sigma = std::clamp(sigma, 0.0, 1.0);

      // Corrector.
      const std::vector<ComplexMatrix> dx_aff = dx;
      const std::vector<ComplexMatrix> dz_aff = dz;
      direction(it, zinv, rd, rp, *schur, sigma, mu, &dx_aff, &dz_aff, dx, dy, dz);

      const double gamma = 0.9 + 0.09 * std::min(prev_pstep, prev_dstep);
      const double pstep = std::min(1.0, gamma * step_limit(it.x, dx));
      const double dstep = std::min(1.0, gamma * step_limit(it.z, dz));
      for (std::size_t j = 0; j < dims_.size(); ++j) {
        it.x[j] = hermitian_part(it.x[j] + pstep * dx[j]);
        it.z[j] = hermitian_part(it.z[j] + dstep * dz[j]);
      }
      it.y += dstep * dy;
      prev_pstep = pstep;
      prev_dstep = dstep;
      stall = (std::max(pstep, dstep) < 1e-7) ? stall + 1 : 0;
    }
    if (best_score <= opt_.loose_tolerance) best.status = SolveStatus::kInaccurate;
    return best;
  }

 private:
  struct RowRef {
    int row;
    int entry;
  };

  Iterate initial_point() const {
    Iterate it;
    it.y = RealVector::Zero(m_);
    for (std::size_t j = 0; j < dims_.size(); ++j) {
      const double d = static_cast<double>(dims_[j]);
      double xi = std::max(10.0, std::sqrt(d));
      double eta = std::max(10.0, std::sqrt(d));
      double amax = 0.0;
      for (const auto& ref : by_block_[j]) {
        const auto& row = rows_[static_cast<std::size_t>(ref.row)];
        const double an = row.entries[static_cast<std::size_t>(ref.entry)].a.norm();
        xi = std::max(xi, d * (1.0 + std::abs(row.rhs)) / (1.0 + an));
        amax = std::max(amax, an);
      }
      eta = std::max(eta, (1.0 + std::max(amax, c_[j].norm())) / std::sqrt(d));
      it.x.push_back(xi * identity(dims_[j]));
      it.z.push_back(eta * identity(dims_[j]));
    }
    return it;
  }

  RealVector apply_a(const std::vector<ComplexMatrix>& x) const {
    RealVector out(m_);
    for (Index i = 0; i < m_; ++i) {
      double s = 0.0;
      for (const auto& e : rows_[static_cast<std::size_t>(i)].entries)
        s += trace_inner(e.a, x[static_cast<std::size_t>(e.block)]);
      out(i) = s;
    }
    return out;
  }

  std::vector<ComplexMatrix> apply_at(const RealVector& y) const {
    std::vector<ComplexMatrix> out;
    for (Index d : dims_) out.push_back(ComplexMatrix::Zero(d, d));
    for (Index i = 0; i < m_; ++i) {
      if (y(i) == 0.0) continue;
      for (const auto& e : rows_[static_cast<std::size_t>(i)].entries)
        out[static_cast<std::size_t>(e.block)] += y(i) * e.a;
    }
    return out;
  }

  struct Schur {
    RealMatrix m;
    Eigen::LDLT<RealMatrix> ldlt;

    /// LDLT solve plus a few rounds of iterative refinement.
    RealVector solve(const RealVector& rhs) const {
      RealVector x = ldlt.solve(rhs);
      for (int i = 0; i < 3; ++i) {
        const RealVector r = rhs - m * x;
        if (r.norm() <= 1e-15 * (1.0 + rhs.norm())) break;
        x += ldlt.solve(r);
      }
      return x;
    }
  };

  std::optional<Schur> factor_schur(const std::vector<ComplexMatrix>& x,
                                    const std::vector<ComplexMatrix>& zinv) const {
    RealMatrix m = RealMatrix::Zero(m_, m_);
    for (std::size_t j = 0; j < dims_.size(); ++j) {
      const auto& refs = by_block_[j];
      std::vector<ComplexMatrix> g;
      g.reserve(refs.size());
      for (const auto& ref : refs) {
        const auto& a = rows_[static_cast<std::size_t>(ref.row)].entries[static_cast<std::size_t>(ref.entry)].a;
        g.push_back(x[j] * a * zinv[j]);
      }
      for (std::size_t p = 0; p < refs.size(); ++p) {
        for (std::size_t q = p; q < refs.size(); ++q) {
          const auto& aq = rows_[static_cast<std::size_t>(refs[q].row)].entries[static_cast<std::size_t>(refs[q].entry)].a;
          const double v = trace_inner(aq, g[p]);
          m(refs[p].row, refs[q].row) += v;
          if (p != q) m(refs[q].row, refs[p].row) += v;
        }
      }
    }
    m = 0.5 * (m + m.transpose());
    Schur s{m, Eigen::LDLT<RealMatrix>(m)};
    if (s.ldlt.info() != Eigen::Success || !s.ldlt.isPositive()) {
      const double reg = 1e-14 * std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
      m.diagonal().array() += reg;
      s.ldlt.compute(m);
      if (s.ldlt.info() != Eigen::Success) return std::nullopt;
    }
    return s;
  }

  void direction(const Iterate& it, const std::vector<ComplexMatrix>& zinv,
                 const std::vector<ComplexMatrix>& rd, const RealVector& rp, const Schur& schur,
                 double sigma, double mu, const std::vector<ComplexMatrix>* dx_aff,
                 const std::vector<ComplexMatrix>* dz_aff, std::vector<ComplexMatrix>& dx,
                 RealVector& dy, std::vector<ComplexMatrix>& dz) const {
    // dX = sigma*mu*Z^-1 - X - (X dZ + dXa dZa) Z^-1,  dZ = Rd - A^T dy.
    std::vector<ComplexMatrix> base(dims_.size());
    for (std::size_t j = 0; j < dims_.size(); ++j) {
      ComplexMatrix t = it.x[j] * rd[j];
      if (dx_aff) t += (*dx_aff)[j] * (*dz_aff)[j];
      base[j] = sigma * mu * zinv[j] - it.x[j] - t * zinv[j];
    }
    const RealVector rhs = rp - apply_a(base);
    dy = schur.solve(rhs);
    const std::vector<ComplexMatrix> aty = apply_at(dy);
    dz.resize(dims_.size());
    dx.resize(dims_.size());
    for (std::size_t j = 0; j < dims_.size(); ++j) {
      dz[j] = hermitian_part(rd[j] - aty[j]);
      dx[j] = hermitian_part(base[j] + it.x[j] * aty[j] * zinv[j]);
    }
  }

  double step_limit(const std::vector<ComplexMatrix>& x, const std::vector<ComplexMatrix>& dx) const {
    double t = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < x.size(); ++j) t = std::min(t, max_step(x[j], dx[j]));
    return t;
  }

  bool infeasibility_certificate(const Iterate& it, const std::vector<ComplexMatrix>& rd,
                                 const RealVector& rp) const {
    constexpr double kInfTol = 1e-8;
    // Primal infeasible: b^T y > 0 with A^T y + Z small relative to b^T y.
    const double by = b_.dot(it.y);
    if (by > 0.0) {
      double s = 0.0;
      for (std::size_t j = 0; j < dims_.size(); ++j) s += (c_[j] - rd[j]).squaredNorm();
      if (std::sqrt(s) / by < kInfTol) return true;
    }
    // Dual infeasible: <C, X> < 0 with A(X) small relative to |<C, X>|.
    const double cx = inner(c_, it.x);
    if (cx < 0.0) {
      const RealVector ax = b_ - rp;
      if (ax.norm() / -cx < kInfTol) return true;
    }
    return false;
  }

  const std::vector<Index>& dims_;
  const std::vector<ComplexMatrix>& c_;
  const std::vector<Row>& rows_;
  const SolverOptions& opt_;
  Index m_;
  RealVector b_;
  double n_;
  std::vector<std::vector<RowRef>> by_block_;
};

}  // namespace

std::vector<ComplexMatrix> hermitian_basis(Index d) {
  std::vector<ComplexMatrix> out;
  const double s = 1.0 / std::sqrt(2.0);
  for (Index j = 0; j < d; ++j) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    e(j, j) = 1.0;
    out.push_back(e);
  }
  for (Index j = 0; j < d; ++j) {
    for (Index k = j + 1; k < d; ++k) {
      ComplexMatrix re = ComplexMatrix::Zero(d, d);
      re(j, k) = s;
      re(k, j) = s;
      out.push_back(re);
      ComplexMatrix im = ComplexMatrix::Zero(d, d);
      im(j, k) = Complex(0.0, s);
      im(k, j) = Complex(0.0, -s);
      out.push_back(im);
    }
  }
  return out;
}

Solution InteriorPointSolver::solve(const ConicProblem& problem, const SolverOptions& options) const {
  problem.validate();
  const StandardForm sf = compile(problem);
  const auto n_rows = sf.rows.size();

  // Restrict every block to its face; blocks with an empty face vanish.
  const std::vector<ComplexMatrix> faces = find_faces(sf);
  std::vector<int> reduced_index(sf.dims.size(), -1);
  std::vector<Index> dims;
  std::vector<ComplexMatrix> c;
  for (std::size_t j = 0; j < sf.dims.size(); ++j) {
    if (faces[j].cols() == 0) continue;
    reduced_index[j] = static_cast<int>(dims.size());
    dims.push_back(faces[j].cols());
    c.push_back(hermitian_part(faces[j].adjoint() * sf.c[j] * faces[j]));
  }
  std::vector<Row> rows(n_rows);
  std::vector<double> scale(n_rows, 1.0);
  std::vector<bool> empty(n_rows, false);
  Solution sol;
  for (std::size_t i = 0; i < n_rows; ++i) {
    const double full_norm = row_norm(sf.rows[i]);
    for (const auto& e : sf.rows[i].entries) {
      const int b = reduced_index[static_cast<std::size_t>(e.block)];
      if (b < 0) continue;
      const auto& f = faces[static_cast<std::size_t>(e.block)];
      ComplexMatrix a = hermitian_part(f.adjoint() * e.a * f);
      if (a.norm() > kFaceTol * full_norm) rows[i].entries.push_back({b, std::move(a)});
    }
    const double nrm = row_norm(rows[i]);
    // An empty row 0 = rhs is either vacuous or infeasible.
    if (nrm == 0.0) {
      empty[i] = true;
      if (std::abs(sf.rows[i].rhs) > 1e-8 * std::max(1.0, full_norm)) {
        sol.status = SolveStatus::kInfeasible;
        return sol;
      }
      continue;
    }
    // Unit-normalize; the scale recovers the multipliers.
    scale[i] = 1.0 / nrm;
    for (auto& e : rows[i].entries) e.a *= scale[i];
    rows[i].rhs = sf.rows[i].rhs * scale[i];
  }

  // Drop linearly dependent rows, checking they are implied by the kept ones.
  std::vector<int> live;
  for (std::size_t i = 0; i < n_rows; ++i)
    if (!empty[i]) live.push_back(static_cast<int>(i));
  std::vector<int> kept;
  if (!live.empty()) {
    std::vector<Row> live_rows;
    for (int i : live) live_rows.push_back(rows[static_cast<std::size_t>(i)]);
    const RealMatrix a = dense_rows(live_rows, dims);
    Eigen::ColPivHouseholderQR<RealMatrix> qr(a.transpose());
    qr.setThreshold(1e-10);
    const Index rank = qr.rank();
    const auto perm = qr.colsPermutation().indices();
    std::vector<int> kept_local;
    for (Index r = 0; r < rank; ++r) kept_local.push_back(perm(r));
    std::sort(kept_local.begin(), kept_local.end());
    RealMatrix ak(a.cols(), static_cast<Index>(kept_local.size()));
    RealVector bk(static_cast<Index>(kept_local.size()));
    for (std::size_t r = 0; r < kept_local.size(); ++r) {
      ak.col(static_cast<Index>(r)) = a.row(kept_local[r]).transpose();
      bk(static_cast<Index>(r)) = live_rows[static_cast<std::size_t>(kept_local[r])].rhs;
    }
    if (static_cast<Index>(kept_local.size()) < a.rows()) {
      Eigen::ColPivHouseholderQR<RealMatrix> kqr(ak);
      for (Index i = 0; i < a.rows(); ++i) {
        if (std::binary_search(kept_local.begin(), kept_local.end(), static_cast<int>(i))) continue;
        const RealVector coef = kqr.solve(a.row(i).transpose());
        const double implied = coef.dot(bk);
        const double residual = (ak * coef - a.row(i).transpose()).norm();
        const double mismatch = std::abs(implied - live_rows[static_cast<std::size_t>(i)].rhs);
        if (residual > 1e-8 || mismatch > 1e-8 * (1.0 + std::abs(implied))) {
          sol.status = SolveStatus::kInfeasible;
          return sol;
        }
      }
    }
    for (int r : kept_local) kept.push_back(live[static_cast<std::size_t>(r)]);
  }

  std::vector<Row> active;
  for (int i : kept) active.push_back(rows[static_cast<std::size_t>(i)]);
  Engine::Result res;
  if (dims.empty()) {
    // Every block is forced to zero; the kept rows (if any) have no entries.
    res = {Iterate{}, SolveStatus::kOptimal, 0, 0.0, 0.0, 0.0};
    res.it.y = RealVector::Zero(static_cast<Index>(active.size()));
  } else {
    Engine engine(dims, c, active, options);
    res = engine.run();
  }

  // Map back to the model.
  std::vector<ComplexMatrix> x_full, z_full;
  for (std::size_t j = 0; j < sf.dims.size(); ++j) {
    const int b = reduced_index[j];
    if (b < 0) {
      x_full.push_back(ComplexMatrix::Zero(sf.dims[j], sf.dims[j]));
      z_full.push_back(ComplexMatrix::Zero(sf.dims[j], sf.dims[j]));
      continue;
    }
    const auto& f = faces[j];
    x_full.push_back(hermitian_part(f * res.it.x[static_cast<std::size_t>(b)] * f.adjoint()));
    z_full.push_back(hermitian_part(f * res.it.z[static_cast<std::size_t>(b)] * f.adjoint()));
  }
  RealVector y_full = RealVector::Zero(static_cast<Index>(n_rows));
  for (std::size_t r = 0; r < kept.size(); ++r)
    y_full(kept[r]) = res.it.y(static_cast<Index>(r)) * scale[static_cast<std::size_t>(kept[r])];

  sol.status = res.status;
  sol.iterations = res.iterations;
  sol.primal_infeasibility = res.pinf;
  sol.dual_infeasibility = res.dinf;
  sol.relative_gap = res.gap;
  sol.values.assign(x_full.begin(), x_full.begin() + sf.n_user_blocks);
  double dual = 0.0;
  for (std::size_t i = 0; i < n_rows; ++i) dual += y_full(static_cast<Index>(i)) * sf.rows[i].rhs;
  sol.objective = sf.sign * inner(sf.c, x_full) + sf.offset;
  sol.dual_objective = sf.sign * dual + sf.offset;

  for (int r : sf.scalar_row) sol.scalar_duals.push_back(y_full(r));
  for (const auto& [first, d] : sf.matrix_rows) {
    const auto basis = hermitian_basis(d);
    ComplexMatrix y = ComplexMatrix::Zero(d, d);
    for (std::size_t r = 0; r < basis.size(); ++r) y += y_full(first + static_cast<Index>(r)) * basis[r];
    sol.matrix_duals.push_back(y);
  }
  for (std::size_t k = 0; k < sf.psd_rows.size(); ++k)
    sol.psd_duals.push_back(z_full[static_cast<std::size_t>(sf.n_user_blocks) + k]);

  if (sol.status != SolveStatus::kInfeasible) {
    const auto [residual, min_eig] = verify(problem, sol.values);
    sol.max_equality_residual = residual;
    sol.min_psd_eigenvalue = min_eig;
  }
  return sol;
}

}  // namespace seqsteer::conic
