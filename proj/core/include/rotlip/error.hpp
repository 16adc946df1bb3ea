#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rotlip {

enum class ErrorCode {
  InvalidArgument,
  InvalidCurve,
  DimensionMismatch,
  CodimensionError,
  DistanceTooSmall,
  CurvesTooClose,
  NotClosed,
  NotPlanar,
  NonTransversal,
  PreconditionLength,
  NotStationary,
  NotInvariant,
  EigenvalueSignError,
  ParseError,
  // Numerical failures: the input was acceptable but the computation gave up.
  StepUnderflow,
  SampleBudgetExceeded,
  QuadratureInconclusive,
  WitnessNotFound,
};

std::string_view error_name(ErrorCode code);

/// True for failures of the numerics (as opposed to rejected inputs).
bool is_numerical_failure(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] std::string_view name() const { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace rotlip
