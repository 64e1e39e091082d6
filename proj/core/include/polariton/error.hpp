#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polariton {

enum class ErrorCode {
  MissingField,
  UnknownKey,
  InvalidValue,
  InvalidSiteCount,
  InvalidSpacing,
  InvalidHopping,
  InvalidPotential,
  OddElectronCount,
  TooManyElectrons,
  InvalidPhotonBasis,
  NonPositiveFrequency,
  NegativeCoupling,
  NonPositiveEpsilon,
  ShapeMismatch,
  NotOrthonormal,
  NotNormalized,
  DimensionCapExceeded,
  LanczosNotConverged,
  WrongParticleNumber,
  InvalidScan,
  IoFailure,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Every recoverable failure in the library is reported through this type.
/// `field()` names the offending configuration key or argument when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string field, const std::string& message);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

}  // namespace polariton
