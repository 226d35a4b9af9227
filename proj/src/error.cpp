// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#include "hrtrain/error.hpp"

namespace hrtrain {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonFinite: return "NonFinite";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonPositiveTruthWeight: return "NonPositiveTruthWeight";
    case Errc::ZeroCellMeasure: return "ZeroCellMeasure";
    case Errc::MemoryBudgetExceeded: return "MemoryBudgetExceeded";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::RankDeficientGroup: return "RankDeficientGroup";
    case Errc::WrongCaseKind: return "WrongCaseKind";
    case Errc::NonPositiveDMin: return "NonPositiveDMin";
    case Errc::PoleInput: return "PoleInput";
    case Errc::NewtonDiverged: return "NewtonDiverged";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::InfiniteRelError: return "InfiniteRelError";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace hrtrain
