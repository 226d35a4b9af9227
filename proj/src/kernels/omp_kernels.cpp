// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrtrain/error.hpp"
#include "hrtrain/parallel_kernels.hpp"

#include <algorithm>

namespace hrtrain::kernels {

namespace {

constexpr Index kColumnBlock = 256;

void check_grouped(const DenseMatrix& p, std::span<const Index> offsets, const DenseMatrix& g) {
  require(!offsets.empty() && offsets.front() == 0 && offsets.back() == p.cols(),
          Errc::DimensionMismatch, "group offsets do not cover the columns of p");
  require(g.rows() == p.cols(), Errc::DimensionMismatch, "g rows must equal M_J");
}

}  // namespace

std::vector<Index> packed_block_starts(std::span<const Index> offsets) {
  std::vector<Index> starts(offsets.size(), 0);
  for (std::size_t b = 0; b + 1 < offsets.size(); ++b) {
    const Index s = offsets[b + 1] - offsets[b];
    starts[b + 1] = starts[b] + s * s;
  }
  return starts;
}

namespace omp {

void gemv(const DenseMatrix& a, const Vector& x, Vector& y) {
  require(a.cols() == x.size(), Errc::DimensionMismatch, "gemv: cols(A) != size(x)");
  y.resize(a.rows());
  const Index rows = a.rows();
  const Index cols = a.cols();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < rows; ++i) {
    const double* row = a.data() + i * cols;
    double acc = 0.0;
    for (Index j = 0; j < cols; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void gemv_transposed(const DenseMatrix& a, const Vector& r, Vector& y) {
  require(a.rows() == r.size(), Errc::DimensionMismatch, "gemv_transposed: rows(A) != size(r)");
  const Index rows = a.rows();
  const Index cols = a.cols();
  y.setZero(cols);
  const Index blocks = (cols + kColumnBlock - 1) / kColumnBlock;
  // Each thread owns a column range, so every y[j] is summed over i in order.
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < blocks; ++b) {
    const Index j0 = b * kColumnBlock;
    const Index j1 = std::min(cols, j0 + kColumnBlock);
    double* out = y.data();
    for (Index i = 0; i < rows; ++i) {
      const double ri = r[i];
      const double* row = a.data() + i * cols;
      for (Index j = j0; j < j1; ++j) out[j] += row[j] * ri;
    }
  }
}

void grouped_product_a_layout(const DenseMatrix& p, std::span<const Index> offsets,
                              const DenseMatrix& g, DenseMatrix& out) {
  check_grouped(p, offsets, g);
  const Index n_r = p.rows();
  const Index m = static_cast<Index>(offsets.size()) - 1;
  const Index k_snap = g.cols();
  const DenseMatrix gt = g.transpose();
  out.resize(k_snap * n_r, m);
#pragma omp parallel for schedule(static)
  for (Index k = 0; k < k_snap; ++k) {
    const double* gk = gt.data() + k * gt.cols();
    for (Index n = 0; n < n_r; ++n) {
      const double* pn = p.data() + n * p.cols();
      double* row = out.data() + (k * n_r + n) * m;
      for (Index s = 0; s < m; ++s) {
        double acc = 0.0;
        for (Index j = offsets[s]; j < offsets[s + 1]; ++j) acc += pn[j] * gk[j];
        row[s] = acc;
      }
    }
  }
}

void grouped_product_c_layout(const DenseMatrix& p, std::span<const Index> offsets,
                              const DenseMatrix& g, DenseMatrix& out) {
  check_grouped(p, offsets, g);
  const Index n_r = p.rows();
  const Index m = static_cast<Index>(offsets.size()) - 1;
  const Index cols = g.cols();
  out.setZero(n_r * m, cols);
#pragma omp parallel for collapse(2) schedule(static)
  for (Index n = 0; n < n_r; ++n) {
    for (Index s = 0; s < m; ++s) {
      double* row = out.data() + (n * m + s) * cols;
      for (Index j = offsets[s]; j < offsets[s + 1]; ++j) {
        const double coeff = p(n, j);
        const double* gj = g.data() + j * cols;
        for (Index k = 0; k < cols; ++k) row[k] += coeff * gj[k];
      }
    }
  }
}

void block_diagonal_apply(std::span<const double> blocks, std::span<const Index> offsets,
                          const DenseMatrix& g, DenseMatrix& out) {
  require(!offsets.empty() && offsets.back() == g.rows(), Errc::DimensionMismatch,
          "block_diagonal_apply: offsets do not match rows(g)");
  const std::vector<Index> starts = packed_block_starts(offsets);
  require(static_cast<Index>(blocks.size()) == starts.back(), Errc::DimensionMismatch,
          "block_diagonal_apply: packed block storage has the wrong length");
  const Index groups = static_cast<Index>(offsets.size()) - 1;
  const Index cols = g.cols();
  out.setZero(g.rows(), cols);
#pragma omp parallel for schedule(static)
  for (Index b = 0; b < groups; ++b) {
    const Index r0 = offsets[b];
    const Index s = offsets[b + 1] - r0;
    const double* blk = blocks.data() + starts[b];
    for (Index i = 0; i < s; ++i) {
      double* row = out.data() + (r0 + i) * cols;
      for (Index l = 0; l < s; ++l) {
        const double coeff = blk[i * s + l];
        const double* gl = g.data() + (r0 + l) * cols;
        for (Index k = 0; k < cols; ++k) row[k] += coeff * gl[k];
      }
    }
  }
}

void reorder_c_to_a(const DenseMatrix& c, Index m, Index n_r, DenseMatrix& out) {
  require(c.rows() == m * n_r, Errc::DimensionMismatch, "reorder_c_to_a: rows(C) != N_r·M");
  const Index k_thin = c.cols();
  out.resize(k_thin * n_r, m);
#pragma omp parallel for schedule(static)
  for (Index kappa = 0; kappa < k_thin; ++kappa)
    for (Index n = 0; n < n_r; ++n)
      for (Index s = 0; s < m; ++s) out(kappa * n_r + n, s) = c(n * m + s, kappa);
}

void reorder_a_to_c(const DenseMatrix& a, Index m, Index n_r, DenseMatrix& out) {
  require(a.cols() == m && n_r > 0 && a.rows() % n_r == 0, Errc::DimensionMismatch,
          "reorder_a_to_c: A is not (K·N_r × M)");
  const Index k_thin = a.rows() / n_r;
  out.resize(n_r * m, k_thin);
#pragma omp parallel for schedule(static)
  for (Index n = 0; n < n_r; ++n)
    for (Index s = 0; s < m; ++s)
      for (Index kappa = 0; kappa < k_thin; ++kappa) out(n * m + s, kappa) = a(kappa * n_r + n, s);
}

}  // namespace omp
}  // namespace hrtrain::kernels
