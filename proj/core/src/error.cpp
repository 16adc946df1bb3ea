#include "rotlip/error.hpp"

namespace rotlip {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidCurve: return "InvalidCurve";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CodimensionError: return "CodimensionError";
    case ErrorCode::DistanceTooSmall: return "DistanceTooSmall";
    case ErrorCode::CurvesTooClose: return "CurvesTooClose";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NotPlanar: return "NotPlanar";
    case ErrorCode::NonTransversal: return "NonTransversal";
    case ErrorCode::PreconditionLength: return "PreconditionLength";
    case ErrorCode::NotStationary: return "NotStationary";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::EigenvalueSignError: return "EigenvalueSignError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::SampleBudgetExceeded: return "SampleBudgetExceeded";
    case ErrorCode::QuadratureInconclusive: return "QuadratureInconclusive";
    case ErrorCode::WitnessNotFound: return "WitnessNotFound";
  }
  return "Unknown";
}

bool is_numerical_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::StepUnderflow:
    case ErrorCode::SampleBudgetExceeded:
    case ErrorCode::QuadratureInconclusive:
    case ErrorCode::WitnessNotFound:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

}  // namespace rotlip
