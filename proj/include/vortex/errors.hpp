#pragma once

#include <stdexcept>
#include <string>

namespace vortex {

enum class ErrorCode {
  CoincidentVortices = 1,
  StepSizeUnderflow,
  NonFiniteRHS,
  InvalidTriangle,
  ZeroSide,
  ZeroCirculationProduct,
  ZeroDenominator,
  DegenerateCirculationSum,
  SingularState,
  DegenerateDenominator,
  NotAnEquilibrium,
  GammaOne,
  BadSetup,
  NoEscape,
  DomainError,
  BoundaryTheta,
  QuadratureNonConvergence,
  InvalidArgument,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& what);

}  // namespace vortex
