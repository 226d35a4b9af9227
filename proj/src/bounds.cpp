// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrtrain/bounds.hpp"

#include "hrtrain/error.hpp"

#include <cmath>

namespace hrtrain::bounds {

BoundReport evaluate(const CompressedDataset& cds, const Vector& w, Index m_c) {
  require(w.size() == cds.summands, Errc::DimensionMismatch, "weight vector has the wrong length");
  require(cds.d.size() > 0, Errc::DimensionMismatch, "empty regularization vector");
  BoundReport b;
  b.d_min = cds.d.minCoeff();
  require(b.d_min > 0.0, Errc::NonPositiveDMin, "smallest entry of d must be positive");

  const Vector dev = w - cds.truth_weights;
  b.eta_thin = training::residual_compressed(cds, w);
  b.kappa = cds.kappa_effective;
  b.w_dev_norm = dev.norm();
  b.aposteriori = b.eta_thin + b.kappa * b.w_dev_norm;

  b.epsilon = std::abs(cds.d.dot(dev));
  b.d_dot_wtruth = cds.d.dot(cds.truth_weights);
  b.wtruth_norm = cds.truth_weights.norm();
  b.m_c = m_c;
  b.apriori = b.eta_thin + b.kappa * (std::sqrt(static_cast<double>(m_c)) / b.d_min *
                                          (b.epsilon + b.d_dot_wtruth) +
                                      b.wtruth_norm);
  return b;
}

BoundReport aposteriori(const CompressedDataset& cds, const SparseRule& rule) {
  return evaluate(cds, rule.weights, rule.size());
}

BoundReport apriori(const CompressedDataset& cds, const SparseRule& rule) {
  return evaluate(cds, rule.weights, rule.size());
}

}  // namespace hrtrain::bounds
