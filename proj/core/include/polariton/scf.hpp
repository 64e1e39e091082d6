#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

#include "polariton/model.hpp"
#include "polariton/orbital_set.hpp"
#include "polariton/rdm.hpp"

namespace polariton {

enum class SolverMode { Polaritonic, Fermionic };

[[nodiscard]] std::string_view to_string(SolverMode mode) noexcept;

/// Augmented-Lagrangian bookkeeping for the electronic Pauli bounds
/// g_i = 2 - n_i^e >= 0. Slot i pairs with the i-th largest natural occupation.
struct ConstraintState {
  Vector multipliers;  // >= 0, length B_m
  double penalty = 10.0;
  Vector g_values;
  double inner_tol = 1e-3;
  double constraint_tol = 1e-2;

  [[nodiscard]] static ConstraintState inactive(int n_sites);
  [[nodiscard]] static ConstraintState initial(int n_sites, double penalty);

  /// Constraint weight lambda_i + mu [g_i]^- for a given g.
  [[nodiscard]] double weight(Index slot, double g) const;
  [[nodiscard]] bool enabled() const noexcept { return penalty > 0.0 || (multipliers.size() > 0 && multipliers.maxCoeff() > 0.0); }
};

/// [y]^- = max(-y, 0)
[[nodiscard]] inline double negative_part(double y) noexcept { return y < 0.0 ? -y : 0.0; }

struct TraceRow {
  int outer = 0;
  int inner = 0;
  double energy = 0.0;  // dressed E'
  double gradient_norm = 0.0;
  double max_violation = 0.0;
  double penalty = 0.0;
};
using TraceSink = std::function<void(const TraceRow&)>;

struct ScfOptions {
  SolverMode mode = SolverMode::Polaritonic;
  int max_outer = 50;
  int max_inner = 5000;
  std::uint64_t seed = 0;
  double perturbation = 1e-2;  // amplitude of the seeded random start perturbation; 0 disables
  double initial_penalty = 10.0;
  double penalty_growth = 10.0;
  double max_penalty = 1e8;
  double initial_inner_tol = 1e-3;
  double inner_tol_factor = 0.3;
  double inner_tol_floor = 1e-6;
  double initial_constraint_tol = 1e-2;
  double convergence_tol = 1e-4;  // max(||grad||, |dE|)
  double violation_tol = 1e-6;
  double fermionic_tol = 1e-6;    // projected gradient norm for the single fermionic solve
  TraceSink trace;
};

/// Pieces of the dressed HF energy. `lambda_terms` collects every
/// coupling-dependent contribution (one-body x^2 and x q, and the two-body energy).
struct HfEnergyTerms {
  double kinetic = 0.0;
  double potential = 0.0;
  double photon = 0.0;          // 2 sum_a <a| omega (alpha + 1/2) |a>
  double dipole_self_one = 0.0; // 2 sum_a <a| lambda^2 x^2 / 2 |a>
  double bilinear_one = 0.0;    // 2 sum_a <a| -c x q |a>
  double dipole_self_two = 0.0; // lambda^2 X X part of the two-body energy
  double bilinear_two = 0.0;    // -c (Q X + X Q) part of the two-body energy

  [[nodiscard]] double two_body() const noexcept { return dipole_self_two + bilinear_two; }
  [[nodiscard]] double lambda_terms() const noexcept {
    return dipole_self_one + bilinear_one + dipole_self_two + bilinear_two;
  }
  [[nodiscard]] double total() const noexcept { return kinetic + potential + photon + lambda_terms(); }
};

[[nodiscard]] HfEnergyTerms hf_energy_terms(const DressedOperators& ops, const OrbitalSet& orbitals);

/// Closed-shell dressed HF energy E'.
[[nodiscard]] double hf_energy(const DressedOperators& ops, const OrbitalSet& orbitals);

/// F phi = 2 h' phi + 2 sum_b (2 J_b - K_b) phi, matrix-free. This is the
/// derivative with respect to phi^* (half the real-variable derivative).
[[nodiscard]] Vector fock_apply(const DressedOperators& ops, const OrbitalSet& orbitals, const Vector& phi);
/// Same for every column of `block`.
[[nodiscard]] Matrix fock_apply_block(const DressedOperators& ops, const OrbitalSet& orbitals, const Matrix& block);

/// sum_i w_i G_i phi with G_i phi(., alpha) = 2 psi_i <psi_i|phi(., alpha)>, w_i = lambda_i + mu [g_i]^-.
/// Natural orbitals and g come from `dm` and are paired with the multiplier slots by rank.
[[nodiscard]] Vector constraint_gradient(const DensityMatrices& dm, const ConstraintState& state, const Vector& phi);
[[nodiscard]] Matrix constraint_gradient_block(const DensityMatrices& dm, const ConstraintState& state,
                                               const Matrix& block);

/// g_i = 2 - n_i^e for the descending electronic occupations.
[[nodiscard]] Vector constraint_values(const DensityMatrices& dm);
/// max_i [g_i]^-
[[nodiscard]] double max_violation(const DensityMatrices& dm);

/// L = E' - sum_i lambda_i g_i + (mu / 2) sum_i ([g_i]^-)^2 with g taken from the
/// exact natural occupations of the given orbitals.
[[nodiscard]] double augmented_lagrangian(const DressedOperators& ops, const OrbitalSet& orbitals,
                                          const ConstraintState& state);

/// Real-variable derivative dL/dphi (twice the phi^* derivative), unprojected.
[[nodiscard]] Matrix lagrangian_gradient(const DressedOperators& ops, const OrbitalSet& orbitals,
                                         const ConstraintState& state);

struct InnerResult {
  OrbitalSet orbitals;
  double lagrangian = 0.0;
  double gradient_norm = 0.0;  // projected phi^* gradient
  int iterations = 0;
  bool converged = false;
  bool stalled = false;  // line search could not decrease L
};

/// Preconditioner-free Polak-Ribiere conjugate gradient on the orthonormal
/// orbital manifold with a quadratic-fit line search. L never increases between
/// accepted steps.
[[nodiscard]] InnerResult inner_minimize(const DressedOperators& ops, const OrbitalSet& start,
                                         const ConstraintState& state, double tol, int max_iterations,
                                         const TraceSink& trace = {}, int outer_index = 0);

struct ScfSolution {
  SolverMode mode = SolverMode::Polaritonic;
  OrbitalSet orbitals;
  double dressed_energy = 0.0;
  double physical_energy = 0.0;
  HfEnergyTerms terms;
  DensityMatrices density;
  ConstraintState constraints;
  bool converged = false;
  int outer_iterations = 0;
  int inner_iterations = 0;
  double gradient_norm = 0.0;
  double max_violation = 0.0;
};

/// Lowest N/2 eigenvectors of h', optionally rotated by a seeded random
/// orthogonal perturbation of amplitude `perturbation`.
[[nodiscard]] OrbitalSet initial_orbitals(const CavityLatticeModel& model, const DressedOperators& ops,
                                          double perturbation, std::uint64_t seed);

[[nodiscard]] ScfSolution solve(const CavityLatticeModel& model, const ScfOptions& options);

/// E = E' - (N - 1) omega / 2
[[nodiscard]] double physical_from_dressed(double dressed_energy, int n_electrons, double omega) noexcept;

}  // namespace polariton
