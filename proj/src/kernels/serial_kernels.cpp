// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

// Reference loops for the kernels in omp_kernels.cpp. Kept deliberately plain;
// tests compare both versions entry by entry.

#include "hrtrain/error.hpp"
#include "hrtrain/parallel_kernels.hpp"

namespace hrtrain::kernels::serial {

void gemv(const DenseMatrix& a, const Vector& x, Vector& y) {
  require(a.cols() == x.size(), Errc::DimensionMismatch, "gemv: cols(A) != size(x)");
  y.resize(a.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (Index j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
}

void gemv_transposed(const DenseMatrix& a, const Vector& r, Vector& y) {
  require(a.rows() == r.size(), Errc::DimensionMismatch, "gemv_transposed: rows(A) != size(r)");
  y.setZero(a.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) y[j] += a(i, j) * r[i];
}

void grouped_product_a_layout(const DenseMatrix& p, std::span<const Index> offsets,
                              const DenseMatrix& g, DenseMatrix& out) {
  require(!offsets.empty() && offsets.back() == p.cols() && g.rows() == p.cols(),
          Errc::DimensionMismatch, "grouped product: inconsistent dimensions");
  const Index n_r = p.rows();
  const Index m = static_cast<Index>(offsets.size()) - 1;
  out.resize(g.cols() * n_r, m);
  for (Index k = 0; k < g.cols(); ++k)
    for (Index n = 0; n < n_r; ++n)
      for (Index s = 0; s < m; ++s) {
        double acc = 0.0;
        for (Index j = offsets[s]; j < offsets[s + 1]; ++j) acc += p(n, j) * g(j, k);
        out(k * n_r + n, s) = acc;
      }
}

void grouped_product_c_layout(const DenseMatrix& p, std::span<const Index> offsets,
                              const DenseMatrix& g, DenseMatrix& out) {
  require(!offsets.empty() && offsets.back() == p.cols() && g.rows() == p.cols(),
          Errc::DimensionMismatch, "grouped product: inconsistent dimensions");
  const Index n_r = p.rows();
  const Index m = static_cast<Index>(offsets.size()) - 1;
  out.setZero(n_r * m, g.cols());
  for (Index n = 0; n < n_r; ++n)
    for (Index s = 0; s < m; ++s)
      for (Index j = offsets[s]; j < offsets[s + 1]; ++j)
        for (Index k = 0; k < g.cols(); ++k) out(n * m + s, k) += p(n, j) * g(j, k);
}

void block_diagonal_apply(std::span<const double> blocks, std::span<const Index> offsets,
                          const DenseMatrix& g, DenseMatrix& out) {
  require(!offsets.empty() && offsets.back() == g.rows(), Errc::DimensionMismatch,
          "block_diagonal_apply: offsets do not match rows(g)");
  const std::vector<Index> starts = packed_block_starts(offsets);
  require(static_cast<Index>(blocks.size()) == starts.back(), Errc::DimensionMismatch,
          "block_diagonal_apply: packed block storage has the wrong length");
  out.setZero(g.rows(), g.cols());
  for (std::size_t b = 0; b + 1 < offsets.size(); ++b) {
    const Index r0 = offsets[b];
    const Index s = offsets[b + 1] - r0;
    for (Index i = 0; i < s; ++i)
      for (Index l = 0; l < s; ++l)
        for (Index k = 0; k < g.cols(); ++k)
          out(r0 + i, k) += blocks[starts[b] + i * s + l] * g(r0 + l, k);
  }
}

void reorder_c_to_a(const DenseMatrix& c, Index m, Index n_r, DenseMatrix& out) {
  require(c.rows() == m * n_r, Errc::DimensionMismatch, "reorder_c_to_a: rows(C) != N_r·M");
  out.resize(c.cols() * n_r, m);
  for (Index kappa = 0; kappa < c.cols(); ++kappa)
    for (Index n = 0; n < n_r; ++n)
      for (Index s = 0; s < m; ++s) out(kappa * n_r + n, s) = c(n * m + s, kappa);
}

void reorder_a_to_c(const DenseMatrix& a, Index m, Index n_r, DenseMatrix& out) {
  require(a.cols() == m && n_r > 0 && a.rows() % n_r == 0, Errc::DimensionMismatch,
          "reorder_a_to_c: A is not (K·N_r × M)");
  const Index k_thin = a.rows() / n_r;
  out.resize(n_r * m, k_thin);
  for (Index n = 0; n < n_r; ++n)
    for (Index s = 0; s < m; ++s)
      for (Index kappa = 0; kappa < k_thin; ++kappa) out(n * m + s, kappa) = a(kappa * n_r + n, s);
}

}  // namespace hrtrain::kernels::serial
