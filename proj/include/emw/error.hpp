#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace emw {

enum class ErrorCode {
  InvalidArgument,
  OnCut,
  OnBranchCircle,
  PoleOnPath,
  QuadratureDivergence,
  OutsideQuadratureWindow,
  NoSolution,
  TooCloseToCut,
  NearRim,
  LightConePole,
  RimSingularity,
  SubRadiating,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace emw
