#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polariton/orbital_set.hpp"

namespace polariton {

struct ManyBodyState;

/// Eigen-decomposition of a real symmetric density matrix. Occupations are
/// descending (stable on ties); each eigenvector has its largest-magnitude
/// component positive, first index winning on ties.
struct NaturalDecomposition {
  Vector occupations;
  Matrix orbitals;  // columns
};

[[nodiscard]] NaturalDecomposition natural_decomposition(const Matrix& gamma);

/// Spin-summed one-body reduced density matrices.
///
/// `gamma_p` is normalised to N in both pictures. For exact physical states it
/// is N times the ordinary reduced photon state, which is kept separately in
/// `gamma_p_physical` (trace 1). `gamma_dressed` is only available for
/// orbital-based (dressed) states and is empty otherwise.
struct DensityMatrices {
  int n_electrons = 0;
  Matrix gamma_dressed;
  Matrix gamma_e;
  Matrix gamma_p;
  Matrix gamma_p_physical;
  NaturalDecomposition electronic;
  NaturalDecomposition photonic;
  Vector occ_dressed;  // empty when gamma_dressed is

  [[nodiscard]] const Vector& occ_e() const noexcept { return electronic.occupations; }
  [[nodiscard]] const Vector& occ_p() const noexcept { return photonic.occupations; }
  [[nodiscard]] bool has_dressed() const noexcept { return gamma_dressed.size() > 0; }
};

/// Throws NotOrthonormal if the orbitals deviate from orthonormality by more than `tolerance`.
[[nodiscard]] DensityMatrices from_orbitals(const OrbitalSet& orbitals, double tolerance = 1e-8);

/// Electronic and photonic parts of an exact many-body state. Throws
/// NotNormalized if the coefficient norm deviates from one by more than 1e-8.
[[nodiscard]] DensityMatrices from_exact_state(const ManyBodyState& state);

/// Electronic partial trace of a dressed matrix: gamma_e[i,j] = sum_alpha G[(i,a),(j,a)].
[[nodiscard]] Matrix electronic_trace(const Matrix& dressed, int n_sites, int n_photon);
/// Photonic partial trace: gamma_p[a,b] = sum_i G[(i,a),(i,b)].
[[nodiscard]] Matrix photonic_trace(const Matrix& dressed, int n_sites, int n_photon);

struct ConditionResult {
  std::string name;
  bool pass = true;
  double max_violation = 0.0;
};

struct RepresentabilityReport {
  double tolerance = 1e-6;
  std::vector<ConditionResult> conditions;

  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] const ConditionResult* find(const std::string& name) const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Spin-summed ensemble representability checks:
///   0 <= n_e <= 2, sum n_e = N, n_p >= 0, sum n_p = N, and 0 <= n_dressed <= 2 when available.
[[nodiscard]] RepresentabilityReport representability_report(const DensityMatrices& dm, int n_electrons,
                                                             double tolerance = 1e-6);

/// Frobenius norm of a - b.
[[nodiscard]] double rdm_distance(const Matrix& a, const Matrix& b);

/// sum_i |a_i - b_i| of two descending occupation vectors.
[[nodiscard]] double occupation_distance(const Vector& a, const Vector& b);

}  // namespace polariton
