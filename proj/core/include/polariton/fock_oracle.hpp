#pragma once

#include <cstdint>
#include <vector>

#include "polariton/model.hpp"

namespace polariton {

/// N-electron determinants over 2 B_m spin orbitals, times a photon Fock index.
///
/// Spin orbital p = 2 * site + spin (site-major, spin up = 0 first). A
/// determinant bit mask D stands for c^dag_{p1} c^dag_{p2} ... |0> with
/// p1 < p2 < ..., i.e. creators applied in ascending order from the left.
/// The many-body index of (determinant k, photon alpha) is k * B_ph + alpha.
class DeterminantBasis {
 public:
  DeterminantBasis() = default;
  DeterminantBasis(int n_sites, int n_electrons, int n_photon);

  [[nodiscard]] int n_sites() const noexcept { return n_sites_; }
  [[nodiscard]] int n_spin_orbitals() const noexcept { return 2 * n_sites_; }
  [[nodiscard]] int n_electrons() const noexcept { return n_electrons_; }
  [[nodiscard]] int n_photon() const noexcept { return n_photon_; }
  [[nodiscard]] Index n_determinants() const noexcept { return Index(dets_.size()); }
  [[nodiscard]] Index size() const noexcept { return Index(dets_.size()) * n_photon_; }
  [[nodiscard]] std::uint64_t determinant(Index k) const { return dets_[std::size_t(k)]; }
  [[nodiscard]] const std::vector<std::uint64_t>& determinants() const noexcept { return dets_; }

  /// Position of a determinant, or -1 if absent.
  [[nodiscard]] Index find(std::uint64_t det) const;
  [[nodiscard]] Index index(Index det_index, int alpha) const noexcept { return det_index * n_photon_ + alpha; }

  /// C(2 B_m, N) * B_ph without enumerating.
  [[nodiscard]] static double dimension(int n_sites, int n_electrons, int n_photon);

 private:
  int n_sites_ = 0;
  int n_electrons_ = 0;
  int n_photon_ = 0;
  std::vector<std::uint64_t> dets_;
};

/// Sign of c^dag_to c_from acting on `det` (from occupied, to empty or equal),
/// and the resulting determinant.
struct HopResult {
  std::uint64_t det = 0;
  double sign = 0.0;
};
[[nodiscard]] HopResult apply_hop(std::uint64_t det, int from, int to) noexcept;

/// Physical Hamiltonian split by term, all on the same determinant basis.
struct HamiltonianTerms {
  SparseMatrix kinetic;
  SparseMatrix potential;
  SparseMatrix dipole_self;
  SparseMatrix bilinear;
  SparseMatrix photon;

  [[nodiscard]] SparseMatrix total() const { return kinetic + potential + dipole_self + bilinear + photon; }
};

inline constexpr Index kDefaultNonzeroCap = 2'000'000;

/// Throws DimensionCapExceeded when the estimated number of nonzeros exceeds `nonzero_cap`.
[[nodiscard]] HamiltonianTerms assemble_hamiltonian_terms(const CavityLatticeModel& model, const DeterminantBasis& basis,
                                                          Index nonzero_cap = kDefaultNonzeroCap);
[[nodiscard]] SparseMatrix assemble_hamiltonian(const CavityLatticeModel& model, const DeterminantBasis& basis,
                                                Index nonzero_cap = kDefaultNonzeroCap);

struct ManyBodyState {
  DeterminantBasis basis;
  Vector coefficients;
  double energy = 0.0;
  double residual = 0.0;
};

enum class EigenMethod { Automatic, Dense, Lanczos };

inline constexpr Index kDenseThreshold = 4000;

/// Lowest eigenpair. Automatic picks dense below kDenseThreshold and Lanczos above.
[[nodiscard]] ManyBodyState ground_state(const SparseMatrix& hamiltonian, const DeterminantBasis& basis,
                                         EigenMethod method = EigenMethod::Automatic);

/// Convenience: basis + assembly + diagonalisation.
[[nodiscard]] ManyBodyState solve_exact(const CavityLatticeModel& model, EigenMethod method = EigenMethod::Automatic,
                                        Index nonzero_cap = kDefaultNonzeroCap);

/// First-quantised two-polariton amplitudes C'[p, q, b1, b2], p and q spin
/// orbitals, b1 and b2 Fock indices of the two transformed photon coordinates.
/// Amplitudes with b1 + b2 >= B_ph are zero by construction.
struct DressedTensor {
  int n_spin_orbitals = 0;
  int n_photon = 0;
  std::vector<double> data;

  [[nodiscard]] std::size_t offset(int p, int q, int b1, int b2) const noexcept {
    return ((std::size_t(p) * n_spin_orbitals + q) * n_photon + b1) * n_photon + b2;
  }
  [[nodiscard]] double& at(int p, int q, int b1, int b2) { return data[offset(p, q, b1, b2)]; }
  [[nodiscard]] double at(int p, int q, int b1, int b2) const { return data[offset(p, q, b1, b2)]; }
  [[nodiscard]] double norm() const;
};

/// Binomial weight of |alpha> -> |alpha - beta>|beta> under the centre-of-mass rotation.
[[nodiscard]] double dressing_weight(int alpha, int beta);

/// Throws WrongParticleNumber unless N = 2.
[[nodiscard]] DressedTensor dress_two_particle(const ManyBodyState& state);

struct DressedEigenCheck {
  double energy = 0.0;
  double residual = 0.0;
  double norm = 0.0;
};

/// Applies the dressed Hamiltonian (one-body h' on each polariton plus the
/// separable two-body kernel) to a two-polariton tensor, projected onto total
/// photon excitation < B_ph, and returns <H'> and ||H' psi - <H'> psi||.
[[nodiscard]] DressedEigenCheck dressed_eigen_check(const CavityLatticeModel& model, const DressedTensor& tensor);

/// Gauge photon number evaluated directly on a two-polariton tensor with the
/// dressed operators, minus the (N - 1)/2 auxiliary-vacuum offset.
[[nodiscard]] double dressed_photon_number(const CavityLatticeModel& model, const DressedTensor& tensor);

}  // namespace polariton
