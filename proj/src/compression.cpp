// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrtrain/compression.hpp"

#include "hrtrain/error.hpp"
#include "hrtrain/parallel_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hrtrain {

Eigen::MatrixXd StructuredQr::r_block(Index g) const {
  const std::vector<Index> starts = kernels::packed_block_starts(offsets);
  const Index s = block_size(g);
  Eigen::MatrixXd out(s, s);
  for (Index i = 0; i < s; ++i)
    for (Index j = 0; j < s; ++j) out(i, j) = r_blocks[starts[g] + i * s + j];
  return out;
}

namespace {

DenseMatrix expand_blocks(const std::vector<Index>& offsets, const std::vector<double>& packed) {
  const std::vector<Index> starts = kernels::packed_block_starts(offsets);
  DenseMatrix out = DenseMatrix::Zero(offsets.back(), offsets.back());
  for (std::size_t g = 0; g + 1 < offsets.size(); ++g) {
    const Index s = offsets[g + 1] - offsets[g];
    for (Index i = 0; i < s; ++i)
      for (Index j = 0; j < s; ++j) out(offsets[g] + i, offsets[g] + j) = packed[starts[g] + i * s + j];
  }
  return out;
}

}  // namespace

DenseMatrix StructuredQr::dense_r() const { return expand_blocks(offsets, r_blocks); }
DenseMatrix StructuredQr::dense_r_inv() const { return expand_blocks(offsets, r_inv_blocks); }

namespace compression {

StructuredQr structured_qr(const StructuredN& n) {
  StructuredQr qr;
  qr.kind = n.kind;
  qr.offsets = n.qr_offsets();
  const std::vector<Index> starts = kernels::packed_block_starts(qr.offsets);
  qr.r_blocks.assign(static_cast<std::size_t>(starts.back()), 0.0);
  qr.r_inv_blocks.assign(static_cast<std::size_t>(starts.back()), 0.0);
  qr.zero_group.assign(static_cast<std::size_t>(qr.groups()), 0);

  if (n.kind != CaseKind::CellGeneral) {
    // Columns of N (or N̆) are mutually orthogonal; R holds their norms.
    for (Index j = 0; j < n.m_j(); ++j) {
      const double norm = n.p.col(j).norm();
      if (norm == 0.0) {
        qr.zero_group[j] = 1;
        continue;
      }
      qr.r_blocks[j] = norm;
      qr.r_inv_blocks[j] = 1.0 / norm;
    }
    return qr;
  }

  // CellGeneral: column groups live on disjoint rows of N, so the QR splits
  // into independent QRs of the N_r × |Jᵐ| slices.
  std::string failure;
  Index failed_group = -1;
#pragma omp parallel for schedule(static)
  for (Index g = 0; g < qr.groups(); ++g) {
    const Index s = qr.block_size(g);
    const DenseMatrix slice = n.p.middleCols(qr.offsets[g], s);
    if ((slice.array() == 0.0).all()) {
      qr.zero_group[g] = 1;
      continue;
    }
    Eigen::MatrixXd r;
    bool ok = slice.rows() >= s;
    if (ok) {
      try {
        r = kernels::qr_dense(slice).r;
      } catch (const Error&) {
        ok = false;
      }
    }
    if (!ok) {
#pragma omp critical(hrtrain_qr_failure)
      if (failed_group < 0 || g < failed_group) failed_group = g;
      continue;
    }
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(s, s));
    for (Index i = 0; i < s; ++i)
      for (Index j = 0; j < s; ++j) {
        qr.r_blocks[starts[g] + i * s + j] = r(i, j);
        qr.r_inv_blocks[starts[g] + i * s + j] = r_inv(i, j);
      }
  }
  require(failed_group < 0, Errc::RankDeficientGroup,
          "slice of group " + std::to_string(failed_group) + " is rank deficient");
  return qr;
}

namespace {

DenseMatrix scaled_snapshot_factor(const TrainingDataset& ds, const StructuredQr& qr) {
  DenseMatrix rg;
  kernels::omp::block_diagonal_apply(qr.r_blocks, qr.offsets, ds.g_hat, rg);
  return rg;
}

}  // namespace

Vector compression_spectrum(const TrainingDataset& ds) {
  require(ds.snapshots() >= 1, Errc::DimensionMismatch, "dataset has no snapshots (K = 0)");
  const StructuredQr qr = structured_qr(ds.structure);
  return kernels::singular_values(scaled_snapshot_factor(ds, qr));
}

namespace {

CompressedDataset finish_compression(const TrainingDataset& ds, const StructuredQr& qr,
                                     const kernels::TruncatedSvd& svd) {
  const StructuredN& n = ds.structure;
  const Index k_thin = svd.k;
  CompressedDataset out;
  out.kind = ds.kind;
  out.summands = ds.summands();
  out.test_functions = ds.test_functions();
  out.snapshots = ds.snapshots();
  out.k_thin = k_thin;
  out.singular_values = svd.singular_values;
  out.kappa = svd.tail();
  out.kappa_effective =
      ds.kind == CaseKind::CellSimplified ? simplified_bound_factor(n) * out.kappa : out.kappa;
  out.degenerate_truncation = svd.degenerate;
  out.right = svd.right;

  // G_t = R⁻¹ U₁ Σ₁, then Â is N·G_t written directly in the k-major layout
  // (the same entries reorder_c_to_a would produce from C_thin).
  const DenseMatrix u_sigma = svd.left * svd.singular_values.head(k_thin).asDiagonal();
  kernels::omp::block_diagonal_apply(qr.r_inv_blocks, qr.offsets, u_sigma, out.g_t);
  kernels::omp::grouped_product_a_layout(n.p, n.offsets, out.g_t, out.a_thin);

  out.truth_weights = ds.truth_weights;
  out.d = ds.d;
  out.inactive = n.inactive;
  return out;
}

}  // namespace

CompressedDataset compress(const TrainingDataset& ds, Index k_thin) {
  const StructuredN& n = ds.structure;
  require(ds.snapshots() >= 1, Errc::DimensionMismatch, "dataset has no snapshots (K = 0)");
  const Index max_rank = std::min(n.m_j(), ds.snapshots());
  require(k_thin >= 1 && k_thin <= max_rank, Errc::InvalidArgument,
          "K_thin = " + std::to_string(k_thin) + " outside [1, " + std::to_string(max_rank) + "]");
  const StructuredQr qr = structured_qr(n);
  return finish_compression(ds, qr, kernels::truncated_svd(scaled_snapshot_factor(ds, qr), k_thin));
}

CompressedDataset compress_to_tolerance(const TrainingDataset& ds, double rel_tol) {
  require(ds.snapshots() >= 1, Errc::DimensionMismatch, "dataset has no snapshots (K = 0)");
  const StructuredQr qr = structured_qr(ds.structure);
  const auto svd = kernels::truncated_svd(scaled_snapshot_factor(ds, qr), [&](const Vector& sigma) {
    return choose_rank_from_spectrum(sigma, rel_tol);
  });
  return finish_compression(ds, qr, svd);
}

Index choose_rank_from_spectrum(const Vector& sigma, double rel_tol) {
  require(rel_tol > 0.0 && rel_tol < 1.0, Errc::InvalidArgument, "rel_tol must lie in (0, 1)");
  require(sigma.size() >= 1, Errc::InvalidArgument, "empty singular value list");
  const double total = kernels::tail_energy(sigma, 0);
  for (Index k = 1; k <= sigma.size(); ++k)
    if (kernels::tail_energy(sigma, k) <= rel_tol * total) return k;
  return sigma.size();
}

Index choose_rank(const TrainingDataset& ds, double rel_tol) {
  return choose_rank_from_spectrum(compression_spectrum(ds), rel_tol);
}

double simplified_bound_factor(const StructuredN& n) {
  require(n.kind == CaseKind::CellSimplified, Errc::WrongCaseKind,
          "simplified_bound_factor needs a cell_simplified structure, got " +
              std::string(to_string(n.kind)));
  Index largest = 0;
  for (Index s : n.group_sizes) largest = std::max(largest, s);
  return std::sqrt(static_cast<double>(largest));
}

DenseMatrix prolongate(const CompressedDataset& cds) {
  const DenseMatrix c_thin = manifold::reorder_a_to_c(cds.a_thin, cds.summands, cds.test_functions);
  const DenseMatrix c_bar = c_thin * cds.right;
  return manifold::reorder_c_to_a(c_bar, cds.summands, cds.test_functions, cds.snapshots);
}

}  // namespace compression
}  // namespace hrtrain
