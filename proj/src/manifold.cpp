// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrtrain/manifold.hpp"

#include "hrtrain/error.hpp"
#include "hrtrain/parallel_kernels.hpp"

#include <numeric>
#include <string>

namespace hrtrain {

std::string_view to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::Quadrature: return "quadrature";
    case CaseKind::CellGeneral: return "cell_general";
    case CaseKind::CellSimplified: return "cell_simplified";
  }
  return "unknown";
}

CaseKind case_kind_from_string(std::string_view name) {
  if (name == "quadrature") return CaseKind::Quadrature;
  if (name == "cell_general") return CaseKind::CellGeneral;
  if (name == "cell_simplified") return CaseKind::CellSimplified;
  throw Error(Errc::InvalidArgument, "unknown case kind '" + std::string(name) + "'");
}

Index StructuredN::active_count() const {
  Index count = 0;
  for (char flag : inactive) count += flag ? 0 : 1;
  return count;
}

std::vector<Index> StructuredN::qr_offsets() const {
  if (kind == CaseKind::CellGeneral) return offsets;
  std::vector<Index> cols(static_cast<std::size_t>(m_j()) + 1);
  std::iota(cols.begin(), cols.end(), Index{0});
  return cols;
}

StructuredN make_structured_n(CaseKind kind, DenseMatrix p, std::vector<Index> group_sizes) {
  kernels::require_finite(p, "N coefficient blocks");
  require(p.rows() >= 1, Errc::DimensionMismatch, "N_r must be at least 1");
  StructuredN n;
  n.kind = kind;
  n.summands = static_cast<Index>(group_sizes.size());
  n.test_functions = p.rows();
  n.offsets.assign(group_sizes.size() + 1, 0);
  for (std::size_t m = 0; m < group_sizes.size(); ++m) {
    require(group_sizes[m] >= 1, Errc::DimensionMismatch,
            "group " + std::to_string(m) + " is empty (|J^m| must be >= 1)");
    if (kind == CaseKind::Quadrature)
      require(group_sizes[m] == 1, Errc::DimensionMismatch, "quadrature groups must have size 1");
    n.offsets[m + 1] = n.offsets[m] + group_sizes[m];
  }
  require(n.offsets.back() == p.cols(), Errc::DimensionMismatch,
          "sum of group sizes (" + std::to_string(n.offsets.back()) + ") != columns of p (" +
              std::to_string(p.cols()) + ")");
  n.group_sizes = std::move(group_sizes);
  n.p = std::move(p);

  n.inactive.assign(static_cast<std::size_t>(n.summands), 0);
  for (Index m = 0; m < n.summands; ++m) {
    const auto block = n.p.middleCols(n.offsets[m], n.offsets[m + 1] - n.offsets[m]);
    n.inactive[m] = (block.array() == 0.0).all() ? 1 : 0;
  }
  return n;
}

namespace manifold {

TrainingDataset build_quadrature_dataset(const DenseMatrix& p, const DenseMatrix& g,
                                         const Vector& truth_weights) {
  const Index m = p.cols();
  require(p.rows() >= 1, Errc::DimensionMismatch, "need at least one test function (N_r >= 1)");
  require(g.rows() == m, Errc::DimensionMismatch,
          "snapshot vectors have length " + std::to_string(g.rows()) + ", expected M = " +
              std::to_string(m));
  require(g.cols() >= 1, Errc::DimensionMismatch, "need at least one snapshot (K >= 1)");
  require(truth_weights.size() == m, Errc::DimensionMismatch, "truth weights must have length M");
  kernels::require_finite(g, "nonlinearity snapshots");
  kernels::require_finite(truth_weights, "truth weights");
  for (Index i = 0; i < m; ++i)
    require(truth_weights[i] > 0.0, Errc::NonPositiveTruthWeight,
            "truth weight " + std::to_string(i) + " is not positive");

  TrainingDataset ds;
  ds.kind = CaseKind::Quadrature;
  ds.structure = make_structured_n(CaseKind::Quadrature, p, std::vector<Index>(m, 1));
  ds.g_hat = g;
  ds.truth_weights = truth_weights;
  ds.d = Vector::Ones(m);
  return ds;
}

TrainingDataset build_cell_dataset(const DenseMatrix& rom_coeffs,
                                   const std::vector<IndexList>& connectivity,
                                   const DenseMatrix& local_integrals, const Vector& cell_measures,
                                   const Vector& truth_weights, bool simplified) {
  const Index m = static_cast<Index>(connectivity.size());
  const Index n_r = rom_coeffs.rows();
  require(n_r >= 1, Errc::DimensionMismatch, "need at least one test function (N_r >= 1)");
  require(m >= 1, Errc::DimensionMismatch, "need at least one cell");
  require(cell_measures.size() == m && truth_weights.size() == m, Errc::DimensionMismatch,
          "cell measures and truth weights must have one entry per cell");
  require(local_integrals.cols() >= 1, Errc::DimensionMismatch, "need at least one snapshot (K >= 1)");
  kernels::require_finite(local_integrals, "local integrals");
  kernels::require_finite(rom_coeffs, "ROM coefficients");

  std::vector<Index> sizes(static_cast<std::size_t>(m));
  Index m_j = 0;
  for (Index c = 0; c < m; ++c) {
    sizes[c] = static_cast<Index>(connectivity[c].size());
    m_j += sizes[c];
    require(cell_measures[c] > 0.0, Errc::ZeroCellMeasure,
            "cell " + std::to_string(c) + " has non-positive measure");
    require(truth_weights[c] > 0.0, Errc::NonPositiveTruthWeight,
            "truth weight " + std::to_string(c) + " is not positive");
  }
  require(local_integrals.rows() == m_j, Errc::DimensionMismatch,
          "local integrals have " + std::to_string(local_integrals.rows()) +
              " rows, expected M_J = " + std::to_string(m_j));

  DenseMatrix p(n_r, m_j);
  Index col = 0;
  for (Index c = 0; c < m; ++c)
    for (Index i : connectivity[c]) {
      require(i >= 0 && i < rom_coeffs.cols(), Errc::DimensionMismatch,
              "connectivity of cell " + std::to_string(c) + " references basis index " +
                  std::to_string(i) + " out of range");
      p.col(col++) = rom_coeffs.col(i);
    }

  TrainingDataset ds;
  ds.kind = simplified ? CaseKind::CellSimplified : CaseKind::CellGeneral;
  ds.structure = make_structured_n(ds.kind, std::move(p), std::move(sizes));
  ds.g_hat = local_integrals;
  ds.truth_weights = truth_weights;
  ds.d = cell_measures;
  return ds;
}

std::uint64_t dense_a_bytes(const TrainingDataset& ds) {
  return 8ull * static_cast<std::uint64_t>(ds.snapshots()) *
         static_cast<std::uint64_t>(ds.test_functions()) * static_cast<std::uint64_t>(ds.summands());
}

SolutionManifoldMatrix assemble_dense_a(const TrainingDataset& ds, std::uint64_t memory_budget) {
  require(ds.snapshots() >= 1, Errc::DimensionMismatch, "dataset has no snapshots (K = 0)");
  const std::uint64_t bytes = dense_a_bytes(ds);
  require(bytes <= memory_budget, Errc::MemoryBudgetExceeded,
          "dense solution manifold matrix needs " + std::to_string(bytes) +
              " bytes, budget is " + std::to_string(memory_budget));
  SolutionManifoldMatrix out;
  out.snapshots = ds.snapshots();
  out.test_functions = ds.test_functions();
  kernels::omp::grouped_product_a_layout(ds.structure.p, ds.structure.offsets, ds.g_hat, out.a);
  return out;
}

DenseMatrix assemble_dense_c(const TrainingDataset& ds, std::uint64_t memory_budget) {
  require(ds.snapshots() >= 1, Errc::DimensionMismatch, "dataset has no snapshots (K = 0)");
  require(dense_a_bytes(ds) <= memory_budget, Errc::MemoryBudgetExceeded,
          "dense C matrix exceeds the memory budget");
  DenseMatrix c;
  kernels::omp::grouped_product_c_layout(ds.structure.p, ds.structure.offsets, ds.g_hat, c);
  return c;
}

DenseMatrix reorder_c_to_a(const DenseMatrix& c_thin, Index m, Index n_r, Index k_thin) {
  require(m >= 1 && n_r >= 1 && c_thin.rows() == n_r * m && c_thin.cols() == k_thin,
          Errc::DimensionMismatch,
          "C_thin is " + std::to_string(c_thin.rows()) + "x" + std::to_string(c_thin.cols()) +
              ", expected " + std::to_string(n_r * m) + "x" + std::to_string(k_thin));
  DenseMatrix a;
  kernels::omp::reorder_c_to_a(c_thin, m, n_r, a);
  return a;
}

DenseMatrix reorder_a_to_c(const DenseMatrix& a, Index m, Index n_r) {
  DenseMatrix c;
  kernels::omp::reorder_a_to_c(a, m, n_r, c);
  return c;
}

DenseMatrix dense_n(const StructuredN& n) {
  const Index m = n.summands;
  DenseMatrix out = DenseMatrix::Zero(n.test_functions * m, n.m_j());
  for (Index r = 0; r < n.test_functions; ++r)
    for (Index s = 0; s < m; ++s)
      for (Index j = n.offsets[s]; j < n.offsets[s + 1]; ++j) out(r * m + s, j) = n.p(r, j);
  return out;
}

DenseMatrix dense_n_breve(const StructuredN& n) {
  const Index mj = n.m_j();
  DenseMatrix out = DenseMatrix::Zero(n.test_functions * mj, mj);
  for (Index r = 0; r < n.test_functions; ++r)
    for (Index j = 0; j < mj; ++j) out(r * mj + j, j) = n.p(r, j);
  return out;
}

DenseMatrix dense_t_all(const StructuredN& n) {
  const Index m = n.summands;
  const Index mj = n.m_j();
  DenseMatrix out = DenseMatrix::Zero(n.test_functions * m, n.test_functions * mj);
  for (Index r = 0; r < n.test_functions; ++r)
    for (Index s = 0; s < m; ++s)
      for (Index j = n.offsets[s]; j < n.offsets[s + 1]; ++j) out(r * m + s, r * mj + j) = 1.0;
  return out;
}

}  // namespace manifold
}  // namespace hrtrain
