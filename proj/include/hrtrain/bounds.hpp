// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HRTRAIN_BOUNDS_HPP
#define HRTRAIN_BOUNDS_HPP

#include "hrtrain/compression.hpp"
#include "hrtrain/training.hpp"

namespace hrtrain {

/// Bounds on the uncompressed training residual η(w) = ‖Ã(w − w̃)‖ in terms of
/// quantities available after compressed training:
///   a posteriori:  η ≤ η̂ + κ‖w − w̃‖
///   a priori:      η ≤ η̂ + κ(√M_c/d_min·(ε + dᵀw̃) + ‖w̃‖),  ε = |dᵀ(w − w̃)|
/// κ is CompressedDataset::kappa_effective.
struct BoundReport {
  double eta_thin = 0.0;
  double kappa = 0.0;
  double w_dev_norm = 0.0;
  double aposteriori = 0.0;
  double epsilon = 0.0;
  double d_min = 0.0;
  double d_dot_wtruth = 0.0;
  double wtruth_norm = 0.0;
  Index m_c = 0;
  double apriori = 0.0;
};

namespace bounds {

BoundReport aposteriori(const CompressedDataset& cds, const SparseRule& rule);
BoundReport apriori(const CompressedDataset& cds, const SparseRule& rule);

/// Both bounds for an arbitrary feasible weight vector with at most m_c
/// nonzeros.
BoundReport evaluate(const CompressedDataset& cds, const Vector& w, Index m_c);

}  // namespace bounds
}  // namespace hrtrain

#endif  // HRTRAIN_BOUNDS_HPP
