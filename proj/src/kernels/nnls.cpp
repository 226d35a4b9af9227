// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrtrain/error.hpp"
#include "hrtrain/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hrtrain::kernels {

Vector nnls_dense(const Eigen::MatrixXd& b, const Vector& c) {
  require(b.rows() == c.size(), Errc::DimensionMismatch, "nnls: rows(B) != size(c)");
  const Index n = b.cols();
  Vector x = Vector::Zero(n);
  if (n == 0) return x;

  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = 10.0 * eps * static_cast<double>(std::max(b.rows(), n)) * b.norm() *
                     std::max(c.norm(), std::numeric_limits<double>::min());

  std::vector<char> passive(n, 0);
  // Columns whose unconstrained LS weight came out non-positive right after
  // entering; they are skipped until x changes, which prevents cycling.
  std::vector<char> blocked(n, 0);
  Vector grad = b.transpose() * (c - b * x);

  const int max_outer = static_cast<int>(3 * n + 10);
  for (int outer = 0; outer < max_outer; ++outer) {
    Index t = -1;
    double best = tol;
    for (Index j = 0; j < n; ++j)
      if (!passive[j] && !blocked[j] && grad[j] > best) {
        best = grad[j];
        t = j;
      }
    if (t < 0) break;
    passive[t] = 1;

    bool first = true;
    for (int inner = 0; inner < max_outer; ++inner) {
      std::vector<Index> idx;
      for (Index j = 0; j < n; ++j)
        if (passive[j]) idx.push_back(j);
      Eigen::MatrixXd bp(b.rows(), static_cast<Index>(idx.size()));
      for (std::size_t q = 0; q < idx.size(); ++q) bp.col(static_cast<Index>(q)) = b.col(idx[q]);
      const Vector zp = bp.colPivHouseholderQr().solve(c);

      Vector z = Vector::Zero(n);
      bool all_positive = true;
      for (std::size_t q = 0; q < idx.size(); ++q) {
        z[idx[q]] = zp[static_cast<Index>(q)];
        if (zp[static_cast<Index>(q)] <= 0.0) all_positive = false;
      }
      if (first && z[t] <= 0.0) {
        passive[t] = 0;
        blocked[t] = 1;
        break;
      }
      first = false;
      if (all_positive) {
        x = z;
        std::fill(blocked.begin(), blocked.end(), 0);
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      Index hit = -1;
      for (Index j : idx)
        if (z[j] <= 0.0) {
          const double a = x[j] / (x[j] - z[j]);
          if (a < alpha) {
            alpha = a;
            hit = j;
          }
        }
      x += alpha * (z - x);
      x[hit] = 0.0;
      for (Index j : idx)
        if (x[j] <= 0.0) {
          passive[j] = 0;
          x[j] = 0.0;
        }
      std::fill(blocked.begin(), blocked.end(), 0);
    }
    grad = b.transpose() * (c - b * x);
  }
  return x.cwiseMax(0.0);
}

NnlsResult nnls_columns(const Eigen::MatrixXd& a_support, const Vector& g) {
  require(a_support.rows() == g.size(), Errc::DimensionMismatch, "nnls: rows(A) != size(g)");
  NnlsResult out;
  const Index s = a_support.cols();
  if (s == 0) {
    out.w = Vector();
    out.residual = g.norm();
    return out;
  }
  // min ‖A_S x − g‖ = min ‖R x − Qᵀg‖ up to a constant, so the active-set
  // iterations run on the s × s triangular factor.
  if (a_support.rows() > s) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a_support);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(s).triangularView<Eigen::Upper>();
    const Vector qtg = (qr.householderQ().transpose() * g).head(s);
    out.w = nnls_dense(r, qtg);
  } else {
    out.w = nnls_dense(a_support, g);
  }
  out.residual = (a_support * out.w - g).norm();
  return out;
}

NnlsResult nnls_fixed_support(const DenseMatrix& a, const Vector& g, std::span<const Index> support) {
  require(a.rows() == g.size(), Errc::DimensionMismatch, "nnls: rows(A) != size(g)");
  std::vector<char> seen(a.cols(), 0);
  for (Index j : support) {
    require(j >= 0 && j < a.cols(), Errc::InvalidArgument,
            "support index " + std::to_string(j) + " is not a column of A");
    require(!seen[j], Errc::InvalidArgument, "duplicate support index " + std::to_string(j));
    seen[j] = 1;
  }

  Eigen::MatrixXd cols(a.rows(), static_cast<Index>(support.size()));
  for (std::size_t q = 0; q < support.size(); ++q) cols.col(static_cast<Index>(q)) = a.col(support[q]);
  const NnlsResult reduced = nnls_columns(cols, g);

  NnlsResult out;
  out.w = Vector::Zero(a.cols());
  for (std::size_t q = 0; q < support.size(); ++q) out.w[support[q]] = reduced.w[static_cast<Index>(q)];
  out.residual = reduced.residual;
  return out;
}

}  // namespace hrtrain::kernels
