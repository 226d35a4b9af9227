// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

// Sparse non-negative training of empirical quadrature / cubature weights by
// Orthogonal Matching Pursuit on F(w) = ‖𝒜w − g‖², 𝒜 = [A; dᵀ], g = 𝒜w̃.

#ifndef HRTRAIN_TRAINING_HPP
#define HRTRAIN_TRAINING_HPP

#include "hrtrain/compression.hpp"
#include "hrtrain/manifold.hpp"

#include <string_view>
#include <vector>

namespace hrtrain {

/// The stacked operator is kept as its two pieces; the dᵀ row is implicit so
/// the (possibly huge) manifold block is never copied.
struct LsProblem {
  CaseKind kind = CaseKind::Quadrature;
  DenseMatrix manifold;  // Ã (standard) or Â (compressed)
  Vector d;
  Vector w_truth;
  Vector g;  // 𝒜 w̃, length manifold.rows() + 1
  IndexList active_columns;

  Index columns() const { return manifold.cols(); }
  Index equations() const { return manifold.rows(); }
  /// Explicit [manifold; dᵀ]. Small problems only.
  DenseMatrix a_cal() const;
  /// √F(w)
  double residual(const Vector& w) const;
};

/// ResidualAtRoundoff: √F fell to the rounding level of 𝒜w − g, where further
/// selections would be driven by noise.
enum class StopReason { ReachedMaxTerms, ToleranceMet, NoDescentCandidate, ResidualAtRoundoff };
std::string_view to_string(StopReason reason);

struct SparseRule {
  CaseKind kind = CaseKind::Quadrature;
  IndexList indices;  // selection order
  Vector weights;     // length M, zero off-support
  std::vector<double> residual_history;
  double final_residual = 0.0;
  double g_norm = 0.0;
  StopReason stop = StopReason::ReachedMaxTerms;
  /// Weights after each iteration, only filled when requested.
  std::vector<Vector> iterates;

  Index size() const { return static_cast<Index>(indices.size()); }
};

struct OmpOptions {
  Index max_terms = 0;   // M_c
  double stop_tol = 0.0; // stop once √F ≤ stop_tol·‖g‖
  bool record_iterates = false;
};

namespace training {

LsProblem build_ls_standard(SolutionManifoldMatrix a, const TrainingDataset& ds);
LsProblem build_ls_compressed(const CompressedDataset& cds);

SparseRule omp_train(const LsProblem& problem, const OmpOptions& options);
SparseRule omp_train(const LsProblem& problem, Index max_terms, double stop_tol = 0.0);

/// The rule after its first `terms` selections (requires recorded iterates).
/// OMP is greedy, so this equals a run with M_c = terms.
SparseRule truncate_rule(const SparseRule& rule, Index terms);

/// η(w) = ‖Ã(w − w̃)‖ against the full dense Ã.
double residual_standard(const TrainingDataset& ds, const SparseRule& rule,
                         std::uint64_t memory_budget = kDefaultMemoryBudget);
double residual_standard(const TrainingDataset& ds, const Vector& w,
                         std::uint64_t memory_budget = kDefaultMemoryBudget);

/// η̂(w) = ‖Â(w − w̃)‖
double residual_compressed(const CompressedDataset& cds, const Vector& w);

}  // namespace training
}  // namespace hrtrain

#endif  // HRTRAIN_TRAINING_HPP
