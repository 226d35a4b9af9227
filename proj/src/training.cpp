// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrtrain/training.hpp"

#include "hrtrain/error.hpp"
#include "hrtrain/parallel_kernels.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hrtrain {

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::ReachedMaxTerms: return "reached_max_terms";
    case StopReason::ToleranceMet: return "tolerance_met";
    case StopReason::NoDescentCandidate: return "no_descent_candidate";
    case StopReason::ResidualAtRoundoff: return "residual_at_roundoff";
  }
  return "unknown";
}

DenseMatrix LsProblem::a_cal() const {
  DenseMatrix out(manifold.rows() + 1, manifold.cols());
  out.topRows(manifold.rows()) = manifold;
  out.row(manifold.rows()) = d.transpose();
  return out;
}

double LsProblem::residual(const Vector& w) const {
  require(w.size() == columns(), Errc::DimensionMismatch, "weight vector has the wrong length");
  Vector top;
  kernels::omp::gemv(manifold, w, top);
  const double top_sq = (top - g.head(equations())).squaredNorm();
  const double last = d.dot(w) - g[equations()];
  return std::sqrt(top_sq + last * last);
}

namespace training {

namespace {

LsProblem finish_problem(CaseKind kind, DenseMatrix manifold, const Vector& d, const Vector& w_truth,
                         const std::vector<char>& inactive) {
  require(d.size() == manifold.cols() && w_truth.size() == manifold.cols(),
          Errc::DimensionMismatch, "d and w̃ must have one entry per column of the manifold matrix");
  LsProblem p;
  p.kind = kind;
  p.manifold = std::move(manifold);
  p.d = d;
  p.w_truth = w_truth;
  Vector top;
  kernels::omp::gemv(p.manifold, w_truth, top);
  p.g.resize(top.size() + 1);
  p.g.head(top.size()) = top;
  p.g[top.size()] = d.dot(w_truth);
  for (Index m = 0; m < p.manifold.cols(); ++m)
    if (inactive.empty() || !inactive[m]) p.active_columns.push_back(m);
  return p;
}

}  // namespace

LsProblem build_ls_standard(SolutionManifoldMatrix a, const TrainingDataset& ds) {
  require(a.a.cols() == ds.summands() && a.a.rows() == ds.snapshots() * ds.test_functions(),
          Errc::DimensionMismatch, "manifold matrix does not match the dataset dimensions");
  return finish_problem(ds.kind, std::move(a.a), ds.d, ds.truth_weights, ds.structure.inactive);
}

LsProblem build_ls_compressed(const CompressedDataset& cds) {
  require(cds.a_thin.cols() == cds.summands &&
              cds.a_thin.rows() == cds.k_thin * cds.test_functions,
          Errc::DimensionMismatch, "compressed manifold matrix has inconsistent dimensions");
  return finish_problem(cds.kind, cds.a_thin, cds.d, cds.truth_weights, cds.inactive);
}

SparseRule omp_train(const LsProblem& problem, Index max_terms, double stop_tol) {
  OmpOptions options;
  options.max_terms = max_terms;
  options.stop_tol = stop_tol;
  return omp_train(problem, options);
}

SparseRule omp_train(const LsProblem& problem, const OmpOptions& options) {
  const Index m = problem.columns();
  const Index rows = problem.equations();
  require(problem.g.size() == rows + 1, Errc::DimensionMismatch, "g must have rows(𝒜) entries");
  require(options.max_terms >= 1 &&
              options.max_terms <= static_cast<Index>(problem.active_columns.size()),
          Errc::InvalidArgument,
          "M_c = " + std::to_string(options.max_terms) + " outside [1, " +
              std::to_string(problem.active_columns.size()) + "]");
  require(options.stop_tol >= 0.0, Errc::InvalidArgument, "stop_tol must be non-negative");

  SparseRule rule;
  rule.kind = problem.kind;
  rule.weights = Vector::Zero(m);
  rule.g_norm = problem.g.norm();
  // Gradient entries below this multiple of ‖r‖ are indistinguishable from
  // round-off in 𝒜ᵀr.
  double max_col = 0.0;
  for (Index j = 0; j < m; ++j)
    max_col = std::max(max_col, std::sqrt(problem.manifold.col(j).squaredNorm() + problem.d[j] * problem.d[j]));
  const double guard_factor = 16.0 * std::numeric_limits<double>::epsilon() *
                              std::sqrt(static_cast<double>(rows + 1)) * max_col;

  std::vector<char> candidate(static_cast<std::size_t>(m), 0);
  for (Index j : problem.active_columns) candidate[j] = 1;

  Eigen::MatrixXd support_cols(rows + 1, 0);
  Vector support_w;
  Vector r = -problem.g;  // 𝒜w − g at w = 0
  double current = rule.g_norm;
  Vector grad_top;

  for (Index it = 0; it < options.max_terms; ++it) {
    if (current <= options.stop_tol * rule.g_norm) {
      rule.stop = StopReason::ToleranceMet;
      break;
    }
    if (it > 0 && current <= guard_factor * (rule.g_norm / max_col + support_w.lpNorm<1>())) {
      rule.stop = StopReason::ResidualAtRoundoff;
      break;
    }
    // ∇F = 2𝒜ᵀr; only its sign pattern and ordering matter for the selection.
    kernels::omp::gemv_transposed(problem.manifold, r.head(rows), grad_top);
    const double r_last = r[rows];
    Index best = -1;
    double best_val = 0.0;
    for (Index j = 0; j < m; ++j) {
      if (!candidate[j]) continue;
      const double grad = 2.0 * (grad_top[j] + problem.d[j] * r_last);
      if (best < 0 || grad < best_val) {
        best = j;
        best_val = grad;
      }
    }
    if (best < 0 || best_val >= -2.0 * guard_factor * r.norm()) {
      rule.stop = StopReason::NoDescentCandidate;
      break;
    }

    candidate[best] = 0;
    rule.indices.push_back(best);
    const Index s = support_cols.cols();
    support_cols.conservativeResize(Eigen::NoChange, s + 1);
    support_cols.col(s).head(rows) = problem.manifold.col(best);
    support_cols(rows, s) = problem.d[best];

    kernels::NnlsResult fit = kernels::nnls_columns(support_cols, problem.g);
    if (fit.residual > current) {
      // Round-off on a degenerate step: the previous iterate is still feasible
      // on the grown support and better.
      support_w.conservativeResize(s + 1);
      support_w[s] = 0.0;
    } else {
      support_w = fit.w;
      current = fit.residual;
    }
    r = support_cols * support_w - problem.g;

    rule.weights.setZero();
    for (Index q = 0; q <= s; ++q) rule.weights[rule.indices[q]] = support_w[q];
    rule.residual_history.push_back(current);
    if (options.record_iterates) rule.iterates.push_back(rule.weights);
  }
  rule.final_residual = current;
  return rule;
}

SparseRule truncate_rule(const SparseRule& rule, Index terms) {
  require(terms >= 1 && terms <= rule.size(), Errc::InvalidArgument,
          "cannot truncate a rule of size " + std::to_string(rule.size()) + " to " +
              std::to_string(terms));
  require(static_cast<Index>(rule.iterates.size()) >= terms, Errc::InvalidArgument,
          "rule was trained without recorded iterates");
  SparseRule out;
  out.kind = rule.kind;
  out.indices.assign(rule.indices.begin(), rule.indices.begin() + terms);
  out.weights = rule.iterates[terms - 1];
  out.residual_history.assign(rule.residual_history.begin(), rule.residual_history.begin() + terms);
  out.final_residual = out.residual_history.back();
  out.g_norm = rule.g_norm;
  out.stop = terms == rule.size() ? rule.stop : StopReason::ReachedMaxTerms;
  out.iterates.assign(rule.iterates.begin(), rule.iterates.begin() + terms);
  return out;
}

double residual_standard(const TrainingDataset& ds, const Vector& w, std::uint64_t memory_budget) {
  require(w.size() == ds.summands(), Errc::DimensionMismatch, "weight vector has the wrong length");
  const SolutionManifoldMatrix a = manifold::assemble_dense_a(ds, memory_budget);
  Vector y;
  kernels::omp::gemv(a.a, w - ds.truth_weights, y);
  return y.norm();
}

double residual_standard(const TrainingDataset& ds, const SparseRule& rule, std::uint64_t memory_budget) {
  return residual_standard(ds, rule.weights, memory_budget);
}

double residual_compressed(const CompressedDataset& cds, const Vector& w) {
  require(w.size() == cds.summands, Errc::DimensionMismatch, "weight vector has the wrong length");
  Vector y;
  kernels::omp::gemv(cds.a_thin, w - cds.truth_weights, y);
  return y.norm();
}

}  // namespace training
}  // namespace hrtrain
