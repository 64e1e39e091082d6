#include "polariton/error.hpp"

namespace polariton {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingField: return "MISSING_FIELD";
    case ErrorCode::UnknownKey: return "UNKNOWN_KEY";
    case ErrorCode::InvalidValue: return "INVALID_VALUE";
    case ErrorCode::InvalidSiteCount: return "INVALID_SITE_COUNT";
    case ErrorCode::InvalidSpacing: return "INVALID_SPACING";
    case ErrorCode::InvalidHopping: return "INVALID_HOPPING";
    case ErrorCode::InvalidPotential: return "INVALID_POTENTIAL";
    case ErrorCode::OddElectronCount: return "ODD_ELECTRON_COUNT";
    case ErrorCode::TooManyElectrons: return "TOO_MANY_ELECTRONS";
    case ErrorCode::InvalidPhotonBasis: return "INVALID_PHOTON_BASIS";
    case ErrorCode::NonPositiveFrequency: return "NON_POSITIVE_FREQUENCY";
    case ErrorCode::NegativeCoupling: return "NEGATIVE_COUPLING";
    case ErrorCode::NonPositiveEpsilon: return "NON_POSITIVE_EPSILON";
    case ErrorCode::ShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::NotOrthonormal: return "NOT_ORTHONORMAL";
    case ErrorCode::NotNormalized: return "NOT_NORMALIZED";
    case ErrorCode::DimensionCapExceeded: return "DIMENSION_CAP_EXCEEDED";
    case ErrorCode::LanczosNotConverged: return "LANCZOS_NOT_CONVERGED";
    case ErrorCode::WrongParticleNumber: return "WRONG_PARTICLE_NUMBER";
    case ErrorCode::InvalidScan: return "INVALID_SCAN";
    case ErrorCode::IoFailure: return "IO_FAILURE";
  }
  return "UNKNOWN";
}

Error::Error(ErrorCode code, std::string field, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + (field.empty() ? "" : " [" + field + "]") + ": " +
                         message),
      code_(code),
      field_(std::move(field)) {}

}  // namespace polariton
