#include "heun/error.hpp"

namespace heun {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DuplicateRoot: return "DuplicateRoot";
    case ErrorCode::DegenerateTheta: return "DegenerateTheta";
    case ErrorCode::RootFindingFailure: return "RootFindingFailure";
    case ErrorCode::NullSpaceFailure: return "NullSpaceFailure";
    case ErrorCode::AtomHit: return "AtomHit";
    case ErrorCode::ZeroW: return "ZeroW";
    case ErrorCode::DegenerateEllipse: return "DegenerateEllipse";
    case ErrorCode::OnSupport: return "OnSupport";
    case ErrorCode::OnOrInsideSupport: return "OnOrInsideSupport";
    case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::DivergentIntegral: return "DivergentIntegral";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::ResonantCubic: return "ResonantCubic";
    case ErrorCode::PointInsideEllipse: return "PointInsideEllipse";
    case ErrorCode::BranchJump: return "BranchJump";
    case ErrorCode::LeftHull: return "LeftHull";
    case ErrorCode::Mismatch: return "Mismatch";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace heun
