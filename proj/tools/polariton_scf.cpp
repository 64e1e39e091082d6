// polariton-scf: exact and Hartree-Fock ground states of electrons on a
// lattice coupled to one cavity mode.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "polariton/config.hpp"
#include "polariton/driver.hpp"
#include "polariton/validation.hpp"

namespace fs = std::filesystem;
using namespace polariton;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitFailed = 2;

struct Common {
  std::string config;
  std::string out = "out";
  std::string solvers;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  bool trace = false;
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoFailure, path.string(), "cannot write file");
  f << text;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, dir.string(), ec.message());
}

int resolve_workers(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("POLARITON_SCF_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void print_outcome(const SolverOutcome& o) {
  if (!o.ok) {
    std::printf("  %-5s failed: %s\n", std::string(to_string(o.solver)).c_str(), o.error.c_str());
    return;
  }
  std::printf("  %-5s E = %.10f  N_ph(gauge) = %.6f  max occ_e = %.6f  converged = %s\n",
              std::string(to_string(o.solver)).c_str(), o.physical_energy, o.photons.gauge,
              o.density.occ_e().maxCoeff(), o.converged ? "yes" : "no");
}

int cmd_run(const Common& opt) {
  PointConfig cfg;
  try {
    cfg = parse_point_config(read_json_file(opt.config));
    if (!opt.solvers.empty()) cfg.solvers = parse_solver_list(std::string_view(opt.solvers));
    if (opt.seed) cfg.seed = *opt.seed;
    (void)build_model(cfg);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  PointResult result;
  result.config = cfg;
  std::vector<std::pair<Solver, std::vector<TraceRow>>> traces;
  for (Solver s : cfg.solvers) {
    PointConfig single = cfg;
    single.solvers = {s};
    std::vector<TraceRow> rows;
    TraceSink sink;
    if (opt.trace) sink = [&rows](const TraceRow& r) { rows.push_back(r); };
    PointResult part = run_point(single, sink);
    result.coupling = part.coupling;
    result.outcomes.push_back(std::move(part.outcomes.front()));
    if (opt.trace && s != Solver::Exact) traces.emplace_back(s, std::move(rows));
  }

  ensure_dir(opt.out);
  write_file(fs::path(opt.out) / "run.json", result.to_json().dump(2) + "\n");
  for (const auto& [s, rows] : traces) {
    std::string csv = "outer,iter,energy_dressed,gradient_norm,max_violation,penalty\n";
    for (const TraceRow& r : rows) {
      csv += std::to_string(r.outer) + ',' + std::to_string(r.inner) + ',' + format_number(r.energy) + ',' +
             format_number(r.gradient_norm) + ',' + format_number(r.max_violation) + ',' + format_number(r.penalty) +
             '\n';
    }
    write_file(fs::path(opt.out) / ("trace_" + std::string(to_string(s)) + ".csv"), csv);
  }

  std::printf("g/omega = %.4f  lambda = %.6f\n", cfg.coupling_over_omega, result.coupling);
  for (const auto& o : result.outcomes) print_outcome(o);
  return result.succeeded() ? kExitOk : kExitFailed;
}

int cmd_scan(const Common& opt) {
  ScanSpec spec;
  try {
    nlohmann::json doc = read_json_file(opt.config);
    spec = parse_scan_spec(doc);
    if (!opt.solvers.empty()) spec.solvers = parse_solver_list(std::string_view(opt.solvers));
    if (opt.seed) spec.base.seed = *opt.seed;
    for (double v : spec.axis.values) {
      PointConfig c = spec.base;
      set_axis_value(c, spec.axis.name, v);
      (void)build_model(c);
    }
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const int workers = resolve_workers(opt.workers);
  const ScanResult result = run_scan(spec, workers);

  const fs::path out(opt.out);
  ensure_dir(out / "points");
  std::vector<std::string> files;
  for (const ScanRow& row : result.rows) {
    char name[32];
    std::snprintf(name, sizeof name, "point_%04zu.json", row.index);
    const std::string rel = std::string("points/") + name;
    nlohmann::json j = row.result ? row.result->to_json() : nlohmann::json{{"error", row.error}};
    write_file(out / rel, j.dump(2) + "\n");
    files.push_back(rel);
  }
  write_file(out / "scan.csv", scan_csv(result));
  write_file(out / "manifest.json", scan_manifest(result, files).dump(2) + "\n");

  std::size_t failed = 0;
  for (const ScanRow& row : result.rows) failed += (row.result && row.result->succeeded()) ? 0 : 1;
  std::printf("%zu points, %zu failed, config hash %s, %d workers\n", result.rows.size(), failed, result.hash.c_str(),
              workers);
  return result.any_failed() ? kExitFailed : kExitOk;
}

int cmd_validate(const Common& opt) {
  const ValidationReport report = run_validation(opt.seed.value_or(0));
  for (const auto& c : report.checks) {
    std::printf("%s  %-36s |dev| = %.3e  (tol %.1e)%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                std::abs(c.value), c.tolerance, c.detail.empty() ? "" : "  ", c.detail.c_str());
  }
  if (!opt.out.empty()) {
    ensure_dir(opt.out);
    write_file(fs::path(opt.out) / "validate.json", report.to_json().dump(2) + "\n");
  }
  return report.all_pass() ? kExitOk : kExitFailed;
}

int cmd_spectrum(const Common& opt) {
  std::vector<SpectrumRow> rows;
  try {
    const ScanSpec spec = parse_scan_spec(read_json_file(opt.config));
    if (spec.axis.name != "epsilon") {
      throw Error(ErrorCode::InvalidScan, "axis.name", "spectrum needs an epsilon axis");
    }
    rows = one_body_spectrum(spec.base, spec.axis.values);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const std::string csv = spectrum_csv(rows);
  ensure_dir(opt.out);
  write_file(fs::path(opt.out) / "spectrum.csv", csv);
  std::fputs(csv.c_str(), stdout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity-coupled lattice electrons: exact diagonalisation and polaritonic Hartree-Fock"};
  app.set_version_flag("--version", std::string(POLARITON_VERSION));
  app.require_subcommand(1);

  Common opt;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { opt.seed = s; },
                                            "Random seed for the initial orbital perturbation");
  };

  CLI::App* run = app.add_subcommand("run", "Solve a single parameter point");
  run->add_option("--config", opt.config, "Point configuration (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", opt.out, "Output directory")->capture_default_str();
  run->add_option("--solvers", opt.solvers, "Comma separated subset of exact,phf,fhf");
  run->add_flag("--trace", opt.trace, "Write per-iteration CSV traces for the HF solvers");
  add_seed(run);

  CLI::App* scan = app.add_subcommand("scan", "Run a one-dimensional parameter scan");
  scan->add_option("--config", opt.config, "Scan definition (JSON)")->required()->check(CLI::ExistingFile);
  scan->add_option("--out", opt.out, "Output directory")->capture_default_str();
  scan->add_option("--solvers", opt.solvers, "Comma separated subset of exact,phf,fhf");
  scan->add_option("--workers", opt.workers, "Worker threads (default: POLARITON_SCF_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);
  add_seed(scan);

  CLI::App* validate = app.add_subcommand("validate", "Run the oracle and transform checks");
  validate->add_option("--out", opt.out, "Directory for validate.json");
  add_seed(validate);

  CLI::App* spectrum = app.add_subcommand("spectrum", "One-body spectra of the soft-Coulomb well");
  spectrum->add_option("--config", opt.config, "Scan definition with an epsilon axis")
      ->required()
      ->check(CLI::ExistingFile);
  spectrum->add_option("--out", opt.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(opt);
    if (*scan) return cmd_scan(opt);
    if (*validate) return cmd_validate(opt);
    if (*spectrum) return cmd_spectrum(opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::IoFailure ? kExitFailed : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitConfig;
}
