#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "polariton/error.hpp"

namespace polariton {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Index = Eigen::Index;

/// Raw, unvalidated problem parameters. Either `hopping` is given explicitly or
/// it defaults to 1/(2 spacing^2).
struct ModelParameters {
  int n_sites = 0;
  double spacing = 1.0;
  double hopping = -1.0;  // < 0 means "derive from spacing"
  Vector potential;       // empty means zero potential
  double coupling = 0.0;  // bare lambda
  double frequency = 0.0;
  int n_photon_basis = 0;
  int n_electrons = 0;
  int n_modes = 1;
};

/// Lambda from the dimensionless g/omega.
[[nodiscard]] double coupling_from_ratio(double coupling_over_omega, double frequency);

/// Validated single-mode cavity lattice problem. Immutable after construction.
class CavityLatticeModel {
 public:
  /// Validates `params`; throws Error with a code naming the offending field.
  /// `single_electron_mode` admits N = 1, which is used to check the dressed
  /// one-body operator against the physical Hamiltonian.
  static CavityLatticeModel build(const ModelParameters& params, bool single_electron_mode = false);

  [[nodiscard]] int n_sites() const noexcept { return n_sites_; }
  [[nodiscard]] double spacing() const noexcept { return spacing_; }
  [[nodiscard]] double hopping() const noexcept { return hopping_; }
  [[nodiscard]] const Vector& potential() const noexcept { return potential_; }
  [[nodiscard]] const Vector& positions() const noexcept { return positions_; }
  [[nodiscard]] double coupling() const noexcept { return coupling_; }
  [[nodiscard]] double frequency() const noexcept { return frequency_; }
  [[nodiscard]] int n_photon_basis() const noexcept { return n_photon_basis_; }
  [[nodiscard]] int n_electrons() const noexcept { return n_electrons_; }
  [[nodiscard]] int n_modes() const noexcept { return 1; }
  [[nodiscard]] int n_occupied() const noexcept { return n_electrons_ / 2; }
  [[nodiscard]] Index dressed_dim() const noexcept { return Index(n_sites_) * n_photon_basis_; }

  /// g/omega = lambda / sqrt(2 omega).
  [[nodiscard]] double coupling_over_omega() const noexcept;

  /// Returns a copy with a different bare coupling; the rest stays validated.
  [[nodiscard]] CavityLatticeModel with_coupling(double coupling) const;

 private:
  CavityLatticeModel() = default;

  int n_sites_ = 0;
  double spacing_ = 1.0;
  double hopping_ = 0.5;
  Vector potential_;
  Vector positions_;
  double coupling_ = 0.0;
  double frequency_ = 1.0;
  int n_photon_basis_ = 1;
  int n_electrons_ = 2;
};

/// Lattice positions x_i = (i - (B - 1)/2) * spacing, centred on the middle of the chain.
[[nodiscard]] Vector centred_positions(int n_sites, double spacing);

/// Attractive soft-Coulomb well v_i = -N / sqrt(x_i^2 + epsilon^2).
[[nodiscard]] Vector soft_coulomb_potential(int n_electrons, double epsilon, const Vector& positions);

/// Open-chain tight-binding matrix: -t on the off-diagonals, v_i on the diagonal.
[[nodiscard]] Matrix matter_one_body(const CavityLatticeModel& model);

/// Single-polariton operators on the composite (site x Fock) space, with the
/// composite index (i, alpha) -> i * B_ph + alpha.
///
/// The dressed two-body kernel is never materialised; it is the separable form
///   w' = lambda^2 X (x) X - c (Q (x) X + X (x) Q),   c = lambda * omega / sqrt(N),
/// where X is the site position and Q the Fock-space displacement (a + a^dag)/sqrt(2 omega).
struct DressedOperators {
  int n_sites = 0;
  int n_photon = 0;
  Index dim = 0;
  double lambda = 0.0;
  double omega = 0.0;
  double coupling_const = 0.0;  // c
  Matrix h_one;                 // t' + v'
  Vector x_diag;                // diagonal of X
  Matrix q_op;                  // Q, dense for inspection
  SparseMatrix h_sparse;        // same as h_one, used for products

  [[nodiscard]] Matrix x_op() const { return x_diag.asDiagonal(); }

  /// Matrix-free products on blocks of column vectors.
  [[nodiscard]] Matrix apply_h(const Matrix& v) const { return h_sparse * v; }
  [[nodiscard]] Matrix apply_x(const Matrix& v) const { return x_diag.asDiagonal() * v; }
  [[nodiscard]] Matrix apply_q(const Matrix& v) const;
};

[[nodiscard]] inline Index composite_index(int site, int photon, int n_photon) noexcept {
  return Index(site) * n_photon + photon;
}

/// Dressed one-body matrix h' (kinetic, potential, dipole self-energy, bilinear
/// coupling and oscillator energy for one polariton).
[[nodiscard]] Matrix dressed_one_body(const CavityLatticeModel& model);

/// X and Q as dense d x d matrices.
struct PolaritonOperators {
  Matrix x_op;
  Matrix q_op;
};
[[nodiscard]] PolaritonOperators polariton_operators(const CavityLatticeModel& model);

/// All dressed operators at once.
[[nodiscard]] DressedOperators dressed_operators(const CavityLatticeModel& model);

}  // namespace polariton
