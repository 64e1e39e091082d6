#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "polariton/config.hpp"
#include "polariton/fock_oracle.hpp"
#include "polariton/observables.hpp"
#include "polariton/rdm.hpp"
#include "polariton/scf.hpp"

namespace polariton {

/// Result of one solver at one parameter point. `ok` is false when the solver
/// threw; `error` then carries the message and every number is NaN.
struct SolverOutcome {
  Solver solver = Solver::Phf;
  bool ok = false;
  bool converged = false;
  std::string error;

  double physical_energy = 0.0;
  double dressed_energy = 0.0;
  PhotonNumber photons;  // bare is NaN for HF solvers
  EnergyDecomposition energy;
  DensityMatrices density;
  RepresentabilityReport representability;

  int outer_iterations = 0;
  int inner_iterations = 0;
  double gradient_norm = 0.0;
  double max_violation = 0.0;
  double residual = 0.0;  // exact solver only
  Vector multipliers;

  [[nodiscard]] nlohmann::json to_json() const;
};

struct PointResult {
  PointConfig config;
  double coupling = 0.0;  // bare lambda
  std::vector<SolverOutcome> outcomes;

  [[nodiscard]] const SolverOutcome* find(Solver s) const;
  /// Every requested solver ran and converged.
  [[nodiscard]] bool succeeded() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Runs every solver in `config.solvers`. Model errors propagate; solver
/// failures are recorded in the outcome.
[[nodiscard]] PointResult run_point(const PointConfig& config, const TraceSink& trace = {});

struct ScanAxis {
  std::string name;
  std::vector<double> values;
};

/// {"base": {...point config...}, "axis": {"name": ..., "values": [...]} or
/// {"name", "start", "stop", "step"}, "solvers": [...], "reference": "zero_coupling" | "none"}
struct ScanSpec {
  PointConfig base;
  ScanAxis axis;
  std::vector<Solver> solvers;
  bool zero_coupling_reference = true;
};

[[nodiscard]] ScanSpec parse_scan_spec(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json to_json(const ScanSpec& spec);

/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
[[nodiscard]] std::string config_hash(const nlohmann::json& doc);

struct ScanColumns {
  double dgamma_ref = 0.0;         // ||gamma_e - gamma_e(ref)||_F
  double dgamma_ref_per_n = 0.0;   // same / N
  double dn_ref = 0.0;             // sum |n_e - n_e(ref)|
  double dgamma_exact = 0.0;       // ||gamma_e - gamma_e(exact)||_F at the same point
};

struct ScanRow {
  std::size_t index = 0;
  double axis_value = 0.0;
  PointConfig config;
  std::optional<PointResult> result;  // empty when the point failed before any solver ran
  std::string error;
  std::vector<ScanColumns> columns;   // parallel to spec.solvers
};

struct ScanResult {
  ScanSpec spec;
  std::vector<ScanRow> rows;
  std::string hash;

  [[nodiscard]] bool any_failed() const;
};

/// Executes the grid over `workers` threads. Rows are ordered by grid index
/// independent of completion order.
[[nodiscard]] ScanResult run_scan(const ScanSpec& spec, int workers);

[[nodiscard]] std::string scan_csv(const ScanResult& result);
/// `point_files[i]` is the relative path of row i's summary, or empty.
[[nodiscard]] nlohmann::json scan_manifest(const ScanResult& result, const std::vector<std::string>& point_files);

struct SpectrumRow {
  double epsilon = 0.0;
  Vector levels;  // lowest eigenvalues of the matter one-body matrix, ascending
};

/// One-body spectra of the soft-Coulomb well along an epsilon axis.
[[nodiscard]] std::vector<SpectrumRow> one_body_spectrum(const PointConfig& base, const std::vector<double>& epsilons,
                                                         int n_levels = 4);
[[nodiscard]] std::string spectrum_csv(const std::vector<SpectrumRow>& rows);

/// Fixed-width scientific formatting used for every CSV number.
[[nodiscard]] std::string format_number(double v);

}  // namespace polariton
