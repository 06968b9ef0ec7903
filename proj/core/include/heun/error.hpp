#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heun {

enum class ErrorCode {
  InvalidArgument,
  DuplicateRoot,
  DegenerateTheta,
  RootFindingFailure,
  NullSpaceFailure,
  AtomHit,
  ZeroW,
  DegenerateEllipse,
  OnSupport,
  OnOrInsideSupport,
  QuadratureNonConvergence,
  DivergentIntegral,
  StepSizeUnderflow,
  ResonantCubic,
  PointInsideEllipse,
  BranchJump,
  LeftHull,
  Mismatch,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace heun
