#include "vortex/errors.hpp"

namespace vortex {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::CoincidentVortices: return "CoincidentVortices";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::NonFiniteRHS: return "NonFiniteRHS";
    case ErrorCode::InvalidTriangle: return "InvalidTriangle";
    case ErrorCode::ZeroSide: return "ZeroSide";
    case ErrorCode::ZeroCirculationProduct: return "ZeroCirculationProduct";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::DegenerateCirculationSum: return "DegenerateCirculationSum";
    case ErrorCode::SingularState: return "SingularState";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::NotAnEquilibrium: return "NotAnEquilibrium";
    case ErrorCode::GammaOne: return "GammaOne";
    case ErrorCode::BadSetup: return "BadSetup";
    case ErrorCode::NoEscape: return "NoEscape";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::BoundaryTheta: return "BoundaryTheta";
    case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

void raise(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_name(code)) + ": " + what);
}

}  // namespace vortex
