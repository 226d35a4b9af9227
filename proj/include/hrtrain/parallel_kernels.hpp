// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

// Data-parallel inner loops. `omp` holds the OpenMP versions used by the
// library; `serial` holds plain-loop references with the same per-entry
// summation order, so both produce bit-identical results for any thread count.
//
// Grouped layout: p is N_r × M_J, `offsets` has M+1 entries and group m owns
// columns [offsets[m], offsets[m+1]) of p and the same rows of g.

#ifndef HRTRAIN_PARALLEL_KERNELS_HPP
#define HRTRAIN_PARALLEL_KERNELS_HPP

#include "hrtrain/kernels.hpp"

#include <span>
#include <vector>

namespace hrtrain::kernels {

namespace omp {

/// y = A x
void gemv(const DenseMatrix& a, const Vector& x, Vector& y);
/// y = Aᵀ r
void gemv_transposed(const DenseMatrix& a, const Vector& r, Vector& y);
/// out[k·N_r + n, m] = Σ_{j∈Jᵐ} p[n, j]·g[j, k]      (K·N_r × M)
void grouped_product_a_layout(const DenseMatrix& p, std::span<const Index> offsets,
                              const DenseMatrix& g, DenseMatrix& out);
/// out[n·M + m, k] = Σ_{j∈Jᵐ} p[n, j]·g[j, k]        (N_r·M × K)
void grouped_product_c_layout(const DenseMatrix& p, std::span<const Index> offsets,
                              const DenseMatrix& g, DenseMatrix& out);
/// out = blockdiag(R)·g with the blocks packed row-major, back to back.
void block_diagonal_apply(std::span<const double> blocks, std::span<const Index> offsets,
                          const DenseMatrix& g, DenseMatrix& out);
/// out[κ·N_r + n, m] = c[n·M + m, κ]
void reorder_c_to_a(const DenseMatrix& c, Index m, Index n_r, DenseMatrix& out);
/// out[n·M + m, κ] = a[κ·N_r + n, m]
void reorder_a_to_c(const DenseMatrix& a, Index m, Index n_r, DenseMatrix& out);

}  // namespace omp

namespace serial {

void gemv(const DenseMatrix& a, const Vector& x, Vector& y);
void gemv_transposed(const DenseMatrix& a, const Vector& r, Vector& y);
void grouped_product_a_layout(const DenseMatrix& p, std::span<const Index> offsets,
                              const DenseMatrix& g, DenseMatrix& out);
void grouped_product_c_layout(const DenseMatrix& p, std::span<const Index> offsets,
                              const DenseMatrix& g, DenseMatrix& out);
void block_diagonal_apply(std::span<const double> blocks, std::span<const Index> offsets,
                          const DenseMatrix& g, DenseMatrix& out);
void reorder_c_to_a(const DenseMatrix& c, Index m, Index n_r, DenseMatrix& out);
void reorder_a_to_c(const DenseMatrix& a, Index m, Index n_r, DenseMatrix& out);

}  // namespace serial

/// Start of each block inside a packed block array: Σ_{h<g} s_h². Has one
/// extra trailing entry holding the total length.
std::vector<Index> packed_block_starts(std::span<const Index> offsets);

}  // namespace hrtrain::kernels

#endif  // HRTRAIN_PARALLEL_KERNELS_HPP
