// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrtrain/error.hpp"
#include "hrtrain/kernels.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <string>

namespace hrtrain::kernels {

namespace {

using ColMatrix = Eigen::MatrixXd;

// Tall inputs are reduced by a Householder QR first; the SVD of the square
// triangular factor is much cheaper than bidiagonalising the full matrix.
struct RawSvd {
  ColMatrix u;  // rows × min
  Vector s;
  ColMatrix v;  // cols × min
};

RawSvd svd_tall(const ColMatrix& a, bool vectors) {
  const Index n = a.cols();
  RawSvd out;
  const unsigned opts = vectors ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  if (a.rows() > 2 * n && n > 16) {
    Eigen::HouseholderQR<ColMatrix> qr(a);
    const ColMatrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    Eigen::BDCSVD<ColMatrix> svd(r, opts);
    out.s = svd.singularValues();
    if (vectors) {
      ColMatrix padded = ColMatrix::Zero(a.rows(), n);
      padded.topRows(n) = svd.matrixU();
      out.u = qr.householderQ() * padded;
      out.v = svd.matrixV();
    }
  } else {
    Eigen::BDCSVD<ColMatrix> svd(a, opts);
    out.s = svd.singularValues();
    if (vectors) {
      out.u = svd.matrixU();
      out.v = svd.matrixV();
    }
  }
  return out;
}

RawSvd svd_any(const DenseMatrix& a, bool vectors) {
  if (a.rows() >= a.cols()) return svd_tall(ColMatrix(a), vectors);
  RawSvd t = svd_tall(ColMatrix(a.transpose()), vectors);
  std::swap(t.u, t.v);
  return t;
}

TruncatedSvd truncate(RawSvd raw, Index k);

}  // namespace

void require_finite(const DenseMatrix& a, const char* what) {
  require(a.allFinite(), Errc::NonFinite, std::string(what) + " contains NaN or Inf");
}

void require_finite(const Vector& v, const char* what) {
  require(v.allFinite(), Errc::NonFinite, std::string(what) + " contains NaN or Inf");
}

double frobenius_norm(const DenseMatrix& a) { return a.norm(); }

double tail_energy(const Vector& singular_values, Index k) {
  double acc = 0.0;
  for (Index i = singular_values.size() - 1; i >= k && i >= 0; --i)
    acc += singular_values[i] * singular_values[i];
  return std::sqrt(acc);
}

Vector singular_values(const DenseMatrix& a) {
  require_finite(a, "matrix");
  if (a.size() == 0) return Vector();
  return svd_any(a, false).s;
}

TruncatedSvd truncated_svd(const DenseMatrix& a, Index k) {
  require_finite(a, "matrix");
  const Index min_dim = std::min(a.rows(), a.cols());
  require(k >= 1 && k <= min_dim, Errc::InvalidArgument,
          "truncation rank " + std::to_string(k) + " outside [1, " + std::to_string(min_dim) + "]");

  return truncate(svd_any(a, true), k);
}

TruncatedSvd truncated_svd(const DenseMatrix& a, const std::function<Index(const Vector&)>& choose_k) {
  require_finite(a, "matrix");
  require(a.size() > 0, Errc::InvalidArgument, "empty matrix");
  RawSvd raw = svd_any(a, true);
  const Index k = choose_k(raw.s);
  require(k >= 1 && k <= raw.s.size(), Errc::InvalidArgument,
          "truncation rank " + std::to_string(k) + " outside [1, " + std::to_string(raw.s.size()) + "]");
  return truncate(std::move(raw), k);
}

namespace {

TruncatedSvd truncate(RawSvd raw, Index k) {
  const Index min_dim = raw.s.size();
  TruncatedSvd out;
  out.k = k;
  out.singular_values = raw.s;
  out.left = raw.u.leftCols(k);
  out.right = raw.v.leftCols(k).transpose();

  for (Index c = 0; c < k; ++c) {
    const double scale = out.left.col(c).cwiseAbs().maxCoeff();
    for (Index i = 0; i < out.left.rows(); ++i) {
      const double u = out.left(i, c);
      if (std::abs(u) > 1e-12 * scale) {
        if (u < 0.0) {
          out.left.col(c) *= -1.0;
          out.right.row(c) *= -1.0;
        }
        break;
      }
    }
  }

  if (k < min_dim) {
    const double s_k = raw.s[k - 1];
    const double s_next = raw.s[k];
    const double s_max = raw.s[0];
    if (s_next > 1e-12 * s_max && std::abs(s_k - s_next) <= 1e-12 * s_k) {
      out.degenerate = true;
      std::cerr << "warning: DegenerateTruncation: sigma_" << k << " == sigma_" << k + 1
                << " (" << s_k << "); truncation is not unique\n";
    }
  }
  return out;
}

}  // namespace

QrFactors qr_dense(const DenseMatrix& a) {
  require_finite(a, "matrix");
  const Index rows = a.rows();
  const Index cols = a.cols();
  require(cols >= 1 && rows >= cols, Errc::RankDeficient,
          "qr_dense needs full column rank (rows >= cols >= 1)");
  Eigen::HouseholderQR<ColMatrix> qr{ColMatrix(a)};
  QrFactors out;
  out.r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  out.q = qr.householderQ() * ColMatrix::Identity(rows, cols);

  const double tol = 1e-12 * a.norm();
  for (Index i = 0; i < cols; ++i) {
    require(std::abs(out.r(i, i)) > tol, Errc::RankDeficient,
            "R(" + std::to_string(i) + "," + std::to_string(i) + ") below 1e-12·‖A‖_F");
    if (out.r(i, i) < 0.0) {
      out.r.row(i) *= -1.0;
      out.q.col(i) *= -1.0;
    }
  }
  return out;
}

}  // namespace hrtrain::kernels
