// SPDX-License-Identifier: Apache-2.0
#include "cdma/errors.hpp"

namespace cdma {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonUnitCode: return "NonUnitCode";
    case ErrorCode::NonPositiveGain: return "NonPositiveGain";
    case ErrorCode::EmptyUserSet: return "EmptyUserSet";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::BracketNotFound: return "BracketNotFound";
    case ErrorCode::NoPositiveRoot: return "NoPositiveRoot";
    case ErrorCode::ZeroPower: return "ZeroPower";
    case ErrorCode::ZeroFilter: return "ZeroFilter";
    case ErrorCode::ZeroProjection: return "ZeroProjection";
    case ErrorCode::ZeroSinr: return "ZeroSinr";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::EmptyCell: return "EmptyCell";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace cdma
