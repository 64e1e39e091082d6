#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polariton/model.hpp"
#include "polariton/scf.hpp"

namespace polariton {

enum class Solver { Exact, Phf, Fhf };

[[nodiscard]] std::string_view to_string(Solver s) noexcept;
[[nodiscard]] Solver parse_solver(std::string_view name);
/// Comma separated list, e.g. "exact,phf". Empty or duplicate entries are rejected.
[[nodiscard]] std::vector<Solver> parse_solver_list(std::string_view csv);
[[nodiscard]] std::vector<Solver> parse_solver_list(const nlohmann::json& array);

struct PotentialSpec {
  enum class Kind { Zero, Explicit, SoftCoulomb };
  Kind kind = Kind::Zero;
  std::vector<double> values;
  double epsilon = 1.0;
};

/// One parameter point as read from a flat JSON document.
struct PointConfig {
  int n_sites = 0;
  double spacing = 1.0;
  std::optional<double> hopping;
  PotentialSpec potential;
  double coupling_over_omega = 0.0;
  double omega = 0.0;
  int n_photon_basis = 0;
  int n_electrons = 0;

  int max_outer = 50;
  int max_inner = 5000;
  std::uint64_t seed = 0;
  double initial_penalty = 10.0;
  double perturbation = 1e-2;
  std::vector<Solver> solvers{Solver::Phf};
};

/// Throws MissingField, UnknownKey or InvalidValue. Range checks happen in build_model.
[[nodiscard]] PointConfig parse_point_config(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json to_json(const PointConfig& config);

[[nodiscard]] CavityLatticeModel build_model(const PointConfig& config);
[[nodiscard]] CavityLatticeModel build_model(const nlohmann::json& doc);

[[nodiscard]] ScfOptions scf_options(const PointConfig& config, SolverMode mode);

/// Scan axes: coupling_over_omega, omega, epsilon, n_electrons, n_photon_basis, spacing.
[[nodiscard]] bool is_scan_axis(std::string_view name) noexcept;
void set_axis_value(PointConfig& config, std::string_view axis, double value);

[[nodiscard]] nlohmann::json read_json_file(const std::string& path);

}  // namespace polariton
