#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polariton/scf.hpp"

namespace polariton {

struct ValidationCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured deviation
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Oracle battery: uncoupled closed forms, single-electron and two-electron
/// dressed-frame checks, dense versus Lanczos, gradient finite differences and
/// the Pauli-violation fixture.
[[nodiscard]] ValidationReport run_validation(std::uint64_t seed = 0);

/// ||g_fd - g|| / ||g|| for the real-variable augmented-Lagrangian gradient,
/// with central differences of step `delta` over every coefficient.
[[nodiscard]] double gradient_fd_error(const DressedOperators& ops, const OrbitalSet& orbitals,
                                       const ConstraintState& state, double delta = 1e-5);

}  // namespace polariton
