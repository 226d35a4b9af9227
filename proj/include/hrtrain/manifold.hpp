// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

// Training data for empirical quadrature / cell-based cubature in factorized
// form C̃ = N·Ĝ.
//
// Orderings are fixed:
//   Ã (solution manifold matrix) has K·N_r rows, row k·N_r + n = (a^{k,n})ᵀ;
//   C̃ has N_r·M rows, row n·M + m, column k = β^m(f(x^k), φ_r^n).
// All indices are zero-based.

#ifndef HRTRAIN_MANIFOLD_HPP
#define HRTRAIN_MANIFOLD_HPP

#include "hrtrain/kernels.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace hrtrain {

enum class CaseKind { Quadrature, CellGeneral, CellSimplified };

std::string_view to_string(CaseKind kind);
CaseKind case_kind_from_string(std::string_view name);

inline constexpr std::uint64_t kDefaultMemoryBudget = 2ull << 30;  // 2 GiB

/// Sparse factor N of C̃ = N·Ĝ, stored through its coefficient blocks.
///
/// Quadrature: one column per point, p row n holds pⁿ (ROM test function n at
/// the points). Cells: group m holds the |Jᵐ| FOM basis indices touching cell
/// m and p row n holds p̂ⁿ, the ROM coefficients λⁿ_i concatenated over groups.
struct StructuredN {
  CaseKind kind = CaseKind::Quadrature;
  Index summands = 0;        // M
  Index test_functions = 0;  // N_r
  std::vector<Index> group_sizes;
  std::vector<Index> offsets;  // M+1 prefix sums of group_sizes
  DenseMatrix p;               // N_r × M_J
  std::vector<char> inactive;  // summand m has an all-zero column block in N

  Index m_j() const { return p.cols(); }
  Index active_count() const;

  /// Column groups of the compressed factor: the summand groups for
  /// CellGeneral, single columns for Quadrature and CellSimplified.
  std::vector<Index> qr_offsets() const;
};

StructuredN make_structured_n(CaseKind kind, DenseMatrix p, std::vector<Index> group_sizes);

struct TrainingDataset {
  CaseKind kind = CaseKind::Quadrature;
  StructuredN structure;
  DenseMatrix g_hat;     // M_J × K, column k = ĝ^k (g^k for quadrature)
  Vector truth_weights;  // w̃, length M
  Vector d;              // β^m(1,1), length M

  Index summands() const { return structure.summands; }
  Index test_functions() const { return structure.test_functions; }
  Index snapshots() const { return g_hat.cols(); }
};

struct SolutionManifoldMatrix {
  DenseMatrix a;  // K·N_r × M
  Index snapshots = 0;
  Index test_functions = 0;
};

namespace manifold {

/// p: N_r × M (row n = pⁿ), g: M × K (column k = g^k), a^{k,n} = g^k ∘ pⁿ.
/// d is all ones since β^m(1,1) = 1·1 at every point.
TrainingDataset build_quadrature_dataset(const DenseMatrix& p, const DenseMatrix& g,
                                         const Vector& truth_weights);

/// rom_coeffs: N_r × N with λⁿ_i in row n. connectivity[m] lists Jᵐ.
/// local_integrals: M_J × K, rows ordered group by group like connectivity,
/// holding β^m(f(x^k), φ^i). d_m is the cell measure.
TrainingDataset build_cell_dataset(const DenseMatrix& rom_coeffs,
                                   const std::vector<IndexList>& connectivity,
                                   const DenseMatrix& local_integrals, const Vector& cell_measures,
                                   const Vector& truth_weights, bool simplified);

/// Bytes a dense Ã of the dataset would occupy (8·K·N_r·M).
std::uint64_t dense_a_bytes(const TrainingDataset& ds);

/// Materialises Ã. Throws MemoryBudgetExceeded past `memory_budget` bytes.
SolutionManifoldMatrix assemble_dense_a(const TrainingDataset& ds,
                                        std::uint64_t memory_budget = kDefaultMemoryBudget);

/// C̃ = N·Ĝ in its own (n-major) layout. Oracle/testing path.
DenseMatrix assemble_dense_c(const TrainingDataset& ds,
                             std::uint64_t memory_budget = kDefaultMemoryBudget);

/// Permutes a C-layout block (N_r·M × K_thin) into A layout (K_thin·N_r × M).
DenseMatrix reorder_c_to_a(const DenseMatrix& c_thin, Index m, Index n_r, Index k_thin);
DenseMatrix reorder_a_to_c(const DenseMatrix& a, Index m, Index n_r);

// Explicit sparse factors as dense matrices. Test oracles only.
DenseMatrix dense_n(const StructuredN& n);        // N_r·M × M_J
DenseMatrix dense_n_breve(const StructuredN& n);  // N_r·M_J × M_J, the simplified factor
DenseMatrix dense_t_all(const StructuredN& n);    // N_r·M × N_r·M_J

}  // namespace manifold
}  // namespace hrtrain

#endif  // HRTRAIN_MANIFOLD_HPP
