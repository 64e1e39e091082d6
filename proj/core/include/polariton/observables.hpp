#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

#include "polariton/fock_oracle.hpp"
#include "polariton/rdm.hpp"
#include "polariton/scf.hpp"

namespace polariton {

enum class Frame { Physical, Dressed };

[[nodiscard]] std::string_view to_string(Frame frame) noexcept;

/// Expectation values of the Hamiltonian split by term. In the dressed frame
/// `dipole_self` and `bilinear` include their two-body parts.
struct EnergyDecomposition {
  Frame frame = Frame::Physical;
  double kinetic = 0.0;
  double potential = 0.0;
  double dipole_self = 0.0;  // E_d
  double bilinear = 0.0;     // E_I
  double photon = 0.0;       // E_ph

  [[nodiscard]] double total() const noexcept { return kinetic + potential + dipole_self + bilinear + photon; }
  [[nodiscard]] nlohmann::json to_json() const;
};

[[nodiscard]] EnergyDecomposition decompose_exact(const HamiltonianTerms& terms, const ManyBodyState& state);
[[nodiscard]] EnergyDecomposition decompose_exact(const CavityLatticeModel& model, const ManyBodyState& state);
[[nodiscard]] EnergyDecomposition decompose_dressed(const HfEnergyTerms& terms);

struct PhotonNumber {
  double bare = 0.0;   // <a^dag a>
  double gauge = 0.0;  // (E_ph + E_I + E_d) / omega - 1/2
};

[[nodiscard]] PhotonNumber photon_number_exact(const CavityLatticeModel& model, const ManyBodyState& state);
[[nodiscard]] PhotonNumber photon_number_exact(const CavityLatticeModel& model, const ManyBodyState& state,
                                               const EnergyDecomposition& energy);

/// (E'_ph + E'_lambda) / omega - (N - 1)/2 - 1/2 for an HF solution.
[[nodiscard]] double photon_number_dressed(const CavityLatticeModel& model, const ScfSolution& solution);
[[nodiscard]] double photon_number_dressed(const CavityLatticeModel& model, const HfEnergyTerms& terms);

/// Diagonal of gamma_e.
[[nodiscard]] Vector density(const DensityMatrices& dm);

}  // namespace polariton
