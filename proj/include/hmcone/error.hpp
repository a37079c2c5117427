#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hmcone {

enum class ErrorCode {
  InvalidPoint,
  NonUnitDirection,
  NonpositiveHeight,
  NonpositiveParameter,
  OutsideDomain,
  EmptySampleSet,
  DegenerateRadii,
  InvalidDirection,
  InvalidHeights,
  InvalidEpsilon,
  InvalidAngle,
  OutsideFoliation,
  CyclicInput,
  InsufficientSamples,
  NotInConeRegion,
  EnclosureNotFound,
  UnboundedComponent,
  RadiusViolation,
  SeparationFailure,
  InvalidMap,
  InvalidMesh,
  MaxIterExceeded,
  ConstantMap,
  MaximumPrincipleViolation,
  StalledInterior,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hmcone
