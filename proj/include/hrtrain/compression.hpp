// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

// Structured compression of the training data along the snapshot dimension.
// Given C̃ = N·Ĝ, the best approximation N·G_p with rank(G_p) ≤ K̂ follows from
// N = QR and a truncated SVD of R·Ĝ; Ã and C̃ are never formed.

#ifndef HRTRAIN_COMPRESSION_HPP
#define HRTRAIN_COMPRESSION_HPP

#include "hrtrain/manifold.hpp"

#include <span>
#include <vector>

namespace hrtrain {

/// Block-diagonal R of N = QR. One 1×1 block per column for Quadrature and
/// CellSimplified, one |Jᵐ|×|Jᵐ| upper-triangular block per cell for
/// CellGeneral. Blocks of inactive (all-zero) groups are zero in both R and
/// R_inv.
struct StructuredQr {
  CaseKind kind = CaseKind::Quadrature;
  std::vector<Index> offsets;  // column groups, groups()+1 entries
  std::vector<double> r_blocks;
  std::vector<double> r_inv_blocks;
  std::vector<char> zero_group;

  Index groups() const { return static_cast<Index>(offsets.size()) - 1; }
  Index block_size(Index g) const { return offsets[g + 1] - offsets[g]; }
  /// Row-major copy of block g of R.
  Eigen::MatrixXd r_block(Index g) const;

  DenseMatrix dense_r() const;
  DenseMatrix dense_r_inv() const;
};

struct CompressedDataset {
  CaseKind kind = CaseKind::Quadrature;
  Index summands = 0;
  Index test_functions = 0;
  Index snapshots = 0;
  Index k_thin = 0;

  DenseMatrix a_thin;      // K̂·N_r × M
  DenseMatrix g_t;         // M_J × K̂, R⁻¹U₁Σ₁
  DenseMatrix right;       // K̂ × K, U₁ᴿ; only needed to prolongate
  Vector singular_values;  // all σ_i of R·Ĝ, descending
  double kappa = 0.0;      // √(Σ_{i>K̂} σ_i²)
  /// Bound on ‖Ã − Ā‖_F used by the error bounds: kappa itself, or
  /// √max|Jᵐ|·kappa for CellSimplified where the SVD compresses C̆ instead of C̃.
  double kappa_effective = 0.0;
  bool degenerate_truncation = false;

  Vector truth_weights;
  Vector d;
  std::vector<char> inactive;

  Index equations() const { return a_thin.rows(); }
};

namespace compression {

/// Analytic/blockwise QR of N. Throws RankDeficientGroup (with the group id)
/// when a CellGeneral slice Pᵐ is numerically rank deficient.
StructuredQr structured_qr(const StructuredN& n);

/// All singular values of R·Ĝ.
Vector compression_spectrum(const TrainingDataset& ds);

CompressedDataset compress(const TrainingDataset& ds, Index k_thin);
/// compress(ds, choose_rank(ds, rel_tol)) with a single SVD.
CompressedDataset compress_to_tolerance(const TrainingDataset& ds, double rel_tol);

/// Smallest K̂ with √(Σ_{i>K̂}σ_i²) ≤ rel_tol·√(Σσ_i²).
Index choose_rank(const TrainingDataset& ds, double rel_tol);
Index choose_rank_from_spectrum(const Vector& sigma, double rel_tol);

/// ‖T_all‖ = max_m √|Jᵐ|. CellSimplified only.
double simplified_bound_factor(const StructuredN& n);

/// Ā = Q̃·Â, the K·N_r × M prolongation of a_thin. Oracle path for tests and
/// small-instance diagnostics; scales with K·N_r·M.
DenseMatrix prolongate(const CompressedDataset& cds);

}  // namespace compression
}  // namespace hrtrain

#endif  // HRTRAIN_COMPRESSION_HPP
