#include "emw/error.hpp"

namespace emw {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OnCut: return "OnCut";
    case ErrorCode::OnBranchCircle: return "OnBranchCircle";
    case ErrorCode::PoleOnPath: return "PoleOnPath";
    case ErrorCode::QuadratureDivergence: return "QuadratureDivergence";
    case ErrorCode::OutsideQuadratureWindow: return "OutsideQuadratureWindow";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::TooCloseToCut: return "TooCloseToCut";
    case ErrorCode::NearRim: return "NearRim";
    case ErrorCode::LightConePole: return "LightConePole";
    case ErrorCode::RimSingularity: return "RimSingularity";
    case ErrorCode::SubRadiating: return "SubRadiating";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace emw
