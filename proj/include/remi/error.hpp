#pragma once

#include <stdexcept>
#include <string>

namespace remi {

enum class ErrorCode {
  ConstantColumn,
  DegenerateProblem,
  ZeroGeneticVariance,
  DegenerateLabels,
  ConstantInput,
  DimensionMismatch,
  MalformedRow,
  NonPositiveSE,
  InconsistentN,
  RaggedRows,
  BadMagic,
  TruncatedPayload,
  InvalidArgument,
  IoFailure,
};

/// Library-wide exception. `index` carries the offending column/row/line
/// when the error is positional, -1 otherwise.
struct Error : std::runtime_error {
  ErrorCode code;
  long index;

  Error(ErrorCode c, const std::string& msg, long idx = -1)
      : std::runtime_error(msg), code(c), index(idx) {}
};

}  // namespace remi
