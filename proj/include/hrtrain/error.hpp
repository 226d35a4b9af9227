// Copyright 2026 The hrtrain Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HRTRAIN_ERROR_HPP
#define HRTRAIN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace hrtrain {

enum class Errc {
  DimensionMismatch,
  NonFinite,
  InvalidArgument,
  NonPositiveTruthWeight,
  ZeroCellMeasure,
  MemoryBudgetExceeded,
  RankDeficient,
  RankDeficientGroup,
  WrongCaseKind,
  NonPositiveDMin,
  PoleInput,
  NewtonDiverged,
  GridMismatch,
  InfiniteRelError,
  ConfigInvalid,
  SchemaMismatch,
  IoError,
};

std::string_view to_string(Errc code);

/// Exception carrying a machine-checkable error code next to the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace hrtrain

#endif  // HRTRAIN_ERROR_HPP
