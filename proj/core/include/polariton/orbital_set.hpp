#pragma once

#include "polariton/model.hpp"

namespace polariton {

/// N/2 real polariton orbitals stored as the columns of a d x (N/2) matrix,
/// d = B_m * B_ph. Each orbital is doubly occupied (spin-restricted).
struct OrbitalSet {
  int n_sites = 0;
  int n_photon = 0;
  Matrix coefficients;

  [[nodiscard]] Index dim() const noexcept { return coefficients.rows(); }
  [[nodiscard]] Index n_occupied() const noexcept { return coefficients.cols(); }
  [[nodiscard]] int n_electrons() const noexcept { return int(2 * coefficients.cols()); }

  /// max |<phi_a|phi_b> - delta_ab|
  [[nodiscard]] double orthonormality_error() const {
    const Index m = coefficients.cols();
    return (coefficients.transpose() * coefficients - Matrix::Identity(m, m)).cwiseAbs().maxCoeff();
  }
};

/// Modified Gram-Schmidt, applied twice. Columns are orthonormalised in order.
void gram_schmidt(Matrix& columns);

}  // namespace polariton
