// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace cdma {

enum class ErrorCode {
  // scenario construction
  DimensionMismatch,
  NonUnitCode,
  NonPositiveGain,
  EmptyUserSet,
  // numerics
  NotSymmetric,
  NoConvergence,
  NotPositiveDefinite,
  NoSignChange,
  BracketNotFound,
  // utility
  NoPositiveRoot,
  ZeroPower,
  // receivers / games
  ZeroFilter,
  ZeroProjection,
  ZeroSinr,
  // configuration and I/O
  ParseError,
  UnknownKey,
  InvalidValue,
  EmptyCell,
  IoError,
};

const char* to_string(ErrorCode code);

/// All library failures surface as this exception; `code()` identifies the
/// contract violation so callers and tests can match on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cdma
