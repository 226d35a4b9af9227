// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

// Dense linear-algebra and constrained least-squares primitives shared by all
// other modules. Everything here is a pure function of its arguments.

#ifndef HRTRAIN_KERNELS_HPP
#define HRTRAIN_KERNELS_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hrtrain {

using Index = Eigen::Index;
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using IndexList = std::vector<Index>;

namespace kernels {

/// Throws Errc::NonFinite if any entry is NaN or infinite.
void require_finite(const DenseMatrix& a, const char* what);
void require_finite(const Vector& v, const char* what);

double frobenius_norm(const DenseMatrix& a);

/// √(Σ_{i ≥ k} σ_i²), summed from the smallest value upwards.
double tail_energy(const Vector& singular_values, Index k);

struct TruncatedSvd {
  DenseMatrix left;        // rows × k, orthonormal columns
  Vector singular_values;  // full list, length min(rows, cols), descending
  DenseMatrix right;       // k × cols, orthonormal rows
  Index k = 0;
  // σ_k and σ_{k+1} coincide to 1e-12 relative, so the truncation is not unique.
  bool degenerate = false;

  double tail() const { return tail_energy(singular_values, k); }
};

/// Best rank-k approximation U₁Σ₁V₁ᵀ together with the complete singular
/// spectrum. Left vectors are sign-normalised so their first nonzero entry is
/// positive.
TruncatedSvd truncated_svd(const DenseMatrix& a, Index k);
/// Same, with k picked from the full singular value list.
TruncatedSvd truncated_svd(const DenseMatrix& a, const std::function<Index(const Vector&)>& choose_k);

/// Singular values only, descending.
Vector singular_values(const DenseMatrix& a);

struct QrFactors {
  DenseMatrix q;  // rows × cols, orthonormal columns
  DenseMatrix r;  // cols × cols, upper triangular, positive diagonal
};

/// Thin QR with positive diagonal of R. Throws Errc::RankDeficient when a
/// diagonal entry of R falls below 1e-12·‖A‖_F.
QrFactors qr_dense(const DenseMatrix& a);

struct NnlsResult {
  Vector w;
  double residual = 0.0;
};

/// min ‖Aw − g‖ s.t. w_i ≥ 0 on `support`, w_j = 0 elsewhere (Lawson–Hanson).
/// An empty support returns w = 0 and ‖g‖.
NnlsResult nnls_fixed_support(const DenseMatrix& a, const Vector& g, std::span<const Index> support);

/// Same problem with the support columns already extracted (rows × s,
/// column-major). Returns the s support weights.
NnlsResult nnls_columns(const Eigen::MatrixXd& a_support, const Vector& g);

/// Lawson–Hanson on a small dense system, all columns free.
Vector nnls_dense(const Eigen::MatrixXd& b, const Vector& c);

}  // namespace kernels
}  // namespace hrtrain

#endif  // HRTRAIN_KERNELS_HPP
