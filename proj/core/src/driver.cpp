#include "polariton/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

namespace polariton {

namespace {

using json = nlohmann::json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

SolverOutcome failed(Solver s, const std::string& message) {
  SolverOutcome o;
  o.solver = s;
  o.error = message;
  o.physical_energy = o.dressed_energy = kNaN;
  o.photons = {kNaN, kNaN};
  o.gradient_norm = o.max_violation = o.residual = kNaN;
  return o;
}

SolverOutcome run_exact(const CavityLatticeModel& model) {
  SolverOutcome o;
  o.solver = Solver::Exact;
  const DeterminantBasis basis(model.n_sites(), model.n_electrons(), model.n_photon_basis());
  const HamiltonianTerms terms = assemble_hamiltonian_terms(model, basis);
  const ManyBodyState state = ground_state(terms.total(), basis);
  o.physical_energy = state.energy;
  o.dressed_energy = state.energy + 0.5 * (model.n_electrons() - 1) * model.frequency();
  o.energy = decompose_exact(terms, state);
  o.photons = photon_number_exact(model, state, o.energy);
  o.density = from_exact_state(state);
  o.representability = representability_report(o.density, model.n_electrons());
  o.residual = state.residual;
  o.gradient_norm = kNaN;
  o.max_violation = 0.0;
  for (Index i = 0; i < o.density.occ_e().size(); ++i) {
    o.max_violation = std::max(o.max_violation, negative_part(2.0 - o.density.occ_e()[i]));
  }
  o.ok = true;
  o.converged = true;
  return o;
}

SolverOutcome run_hf(const CavityLatticeModel& model, const PointConfig& config, Solver s, const TraceSink& trace) {
  ScfOptions options = scf_options(config, s == Solver::Phf ? SolverMode::Polaritonic : SolverMode::Fermionic);
  options.trace = trace;
  const ScfSolution sol = solve(model, options);
  SolverOutcome o;
  o.solver = s;
  o.physical_energy = sol.physical_energy;
  o.dressed_energy = sol.dressed_energy;
  o.energy = decompose_dressed(sol.terms);
  o.photons = {kNaN, photon_number_dressed(model, sol)};
  o.density = sol.density;
  o.representability = representability_report(sol.density, model.n_electrons());
  o.outer_iterations = sol.outer_iterations;
  o.inner_iterations = sol.inner_iterations;
  o.gradient_norm = sol.gradient_norm;
  o.max_violation = sol.max_violation;
  o.residual = kNaN;
  o.multipliers = sol.constraints.multipliers;
  o.ok = true;
  o.converged = sol.converged;
  return o;
}

}  // namespace

json SolverOutcome::to_json() const {
  json j;
  j["solver"] = std::string(to_string(solver));
  j["ok"] = ok;
  j["converged"] = converged;
  if (!ok) {
    j["error"] = error;
    return j;
  }
  j["energy"] = physical_energy;
  j["dressed_energy"] = dressed_energy;
  j["photon_number_gauge"] = photons.gauge;
  j["photon_number_bare"] = std::isnan(photons.bare) ? json(nullptr) : json(photons.bare);
  j["energy_terms"] = energy.to_json();
  j["occ_e"] = vector_json(density.occ_e());
  j["occ_p"] = vector_json(density.occ_p());
  j["density"] = vector_json(polariton::density(density));
  j["representability"] = representability.to_json();
  json diag;
  diag["outer_iterations"] = outer_iterations;
  diag["inner_iterations"] = inner_iterations;
  diag["gradient_norm"] = std::isnan(gradient_norm) ? json(nullptr) : json(gradient_norm);
  diag["max_violation"] = max_violation;
  diag["residual"] = std::isnan(residual) ? json(nullptr) : json(residual);
  diag["multipliers"] = vector_json(multipliers);
  j["diagnostics"] = diag;
  return j;
}

const SolverOutcome* PointResult::find(Solver s) const {
  for (const auto& o : outcomes)
    if (o.solver == s) return &o;
  return nullptr;
}

bool PointResult::succeeded() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const SolverOutcome& o) { return o.ok && o.converged; });
}

json PointResult::to_json() const {
  json j;
  j["schema"] = 1;
  j["version"] = POLARITON_VERSION;
  j["config"] = polariton::to_json(config);
  j["coupling_over_omega"] = config.coupling_over_omega;
  j["lambda"] = coupling;
  json solvers = json::object();
  for (const auto& o : outcomes) solvers[std::string(to_string(o.solver))] = o.to_json();
  j["solvers"] = solvers;
  j["success"] = succeeded();
  return j;
}

PointResult run_point(const PointConfig& config, const TraceSink& trace) {
  const CavityLatticeModel model = build_model(config);
  PointResult r;
  r.config = config;
  r.coupling = model.coupling();
  for (Solver s : config.solvers) {
    try {
      r.outcomes.push_back(s == Solver::Exact ? run_exact(model) : run_hf(model, config, s, trace));
    } catch (const std::exception& e) {
      r.outcomes.push_back(failed(s, e.what()));
    }
  }
  return r;
}

ScanSpec parse_scan_spec(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidScan, "", "scan definition must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "base" && key != "axis" && key != "solvers" && key != "reference") {
      throw Error(ErrorCode::UnknownKey, key, "unknown scan key");
    }
  }
  if (!doc.contains("base")) throw Error(ErrorCode::MissingField, "base", "scan needs a base configuration");
  if (!doc.contains("axis")) throw Error(ErrorCode::MissingField, "axis", "scan needs an axis");

  ScanSpec spec;
  spec.base = parse_point_config(doc["base"]);
  spec.solvers = doc.contains("solvers") ? parse_solver_list(doc["solvers"]) : spec.base.solvers;

  const json& axis = doc["axis"];
  if (!axis.is_object() || !axis.contains("name") || !axis["name"].is_string()) {
    throw Error(ErrorCode::InvalidScan, "axis", "axis needs a string name");
  }
  spec.axis.name = axis["name"].get<std::string>();
  if (!is_scan_axis(spec.axis.name)) throw Error(ErrorCode::InvalidScan, "axis.name", "unsupported axis " + spec.axis.name);
  for (const auto& [key, _] : axis.items()) {
    if (key != "name" && key != "values" && key != "start" && key != "stop" && key != "step") {
      throw Error(ErrorCode::UnknownKey, "axis." + key, "unknown axis key");
    }
  }
  if (axis.contains("values")) {
    if (!axis["values"].is_array()) throw Error(ErrorCode::InvalidScan, "axis.values", "expected an array");
    for (const auto& v : axis["values"]) {
      if (!v.is_number()) throw Error(ErrorCode::InvalidScan, "axis.values", "axis values must be numbers");
      spec.axis.values.push_back(v.get<double>());
    }
  } else if (axis.contains("start") && axis.contains("stop") && axis.contains("step")) {
    const double start = axis["start"].get<double>();
    const double stop = axis["stop"].get<double>();
    const double step = axis["step"].get<double>();
    if (!(step > 0.0) || stop < start) throw Error(ErrorCode::InvalidScan, "axis.step", "need step > 0 and stop >= start");
    const long n = std::lround(std::floor((stop - start) / step + 1e-9));
    for (long k = 0; k <= n; ++k) spec.axis.values.push_back(std::round((start + k * step) * 1e12) / 1e12);
  } else {
    throw Error(ErrorCode::InvalidScan, "axis", "give either values or start/stop/step");
  }
  if (spec.axis.values.empty()) throw Error(ErrorCode::InvalidScan, "axis.values", "scan grid is empty");

  if (doc.contains("reference")) {
    const json& ref = doc["reference"];
    if (ref == "zero_coupling") {
      spec.zero_coupling_reference = true;
    } else if (ref == "none") {
      spec.zero_coupling_reference = false;
    } else {
      throw Error(ErrorCode::InvalidScan, "reference", "reference must be \"zero_coupling\" or \"none\"");
    }
  }

  for (double v : spec.axis.values) {
    PointConfig c = spec.base;
    set_axis_value(c, spec.axis.name, v);
    if (std::find(spec.solvers.begin(), spec.solvers.end(), Solver::Exact) != spec.solvers.end()) {
      const double dim = DeterminantBasis::dimension(c.n_sites, c.n_electrons, c.n_photon_basis);
      if (dim * (2.0 * c.n_electrons + 5.0) > double(kDefaultNonzeroCap)) {
        throw Error(ErrorCode::InvalidScan, "solvers",
                    "exact solver requested but the basis dimension " + std::to_string(std::llround(dim)) +
                        " exceeds the cap");
      }
    }
  }
  return spec;
}

json to_json(const ScanSpec& spec) {
  json j;
  j["base"] = to_json(spec.base);
  j["axis"] = {{"name", spec.axis.name}, {"values", spec.axis.values}};
  json solvers = json::array();
  for (Solver s : spec.solvers) solvers.push_back(std::string(to_string(s)));
  j["solvers"] = solvers;
  j["reference"] = spec.zero_coupling_reference ? "zero_coupling" : "none";
  return j;
}

std::string config_hash(const json& doc) {
  const std::string text = doc.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool ScanResult::any_failed() const {
  return std::any_of(rows.begin(), rows.end(), [](const ScanRow& r) { return !r.result || !r.result->succeeded(); });
}

namespace {

struct Job {
  PointConfig config;
  std::optional<PointResult> result;
  std::string error;
};

void execute(std::vector<Job>& jobs, int workers) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        jobs[i].result = run_point(jobs[i].config);
      } catch (const std::exception& e) {
        jobs[i].error = e.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, int(jobs.size())));
  if (n == 1) {
    work();
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < n; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
}

ScanColumns columns_for(const PointResult& point, const PointResult* reference, Solver s) {
  ScanColumns c{kNaN, kNaN, kNaN, kNaN};
  const SolverOutcome* o = point.find(s);
  if (!o || !o->ok) return c;
  if (reference) {
    const SolverOutcome* r = reference->find(s);
    if (r && r->ok) {
      c.dgamma_ref = rdm_distance(o->density.gamma_e, r->density.gamma_e);
      c.dgamma_ref_per_n = c.dgamma_ref / point.config.n_electrons;
      c.dn_ref = occupation_distance(o->density.occ_e(), r->density.occ_e());
    }
  }
  const SolverOutcome* ex = point.find(Solver::Exact);
  if (s != Solver::Exact && ex && ex->ok) c.dgamma_exact = rdm_distance(o->density.gamma_e, ex->density.gamma_e);
  return c;
}

}  // namespace

ScanResult run_scan(const ScanSpec& spec, int workers) {
  std::vector<Job> jobs;
  std::map<std::string, std::size_t> index_of;
  auto add = [&](const PointConfig& c) {
    const std::string key = to_json(c).dump();
    const auto it = index_of.find(key);
    if (it != index_of.end()) return it->second;
    jobs.push_back({c, std::nullopt, {}});
    index_of.emplace(key, jobs.size() - 1);
    return jobs.size() - 1;
  };

  std::vector<std::size_t> grid_jobs, ref_jobs;
  std::vector<PointConfig> grid;
  for (double v : spec.axis.values) {
    PointConfig c = spec.base;
    c.solvers = spec.solvers;
    set_axis_value(c, spec.axis.name, v);
    grid.push_back(c);
    grid_jobs.push_back(add(c));
  }
  if (spec.zero_coupling_reference) {
    for (const auto& c : grid) {
      PointConfig r = c;
      r.coupling_over_omega = 0.0;
      ref_jobs.push_back(add(r));
    }
  }
  execute(jobs, workers);

  ScanResult out;
  out.spec = spec;
  out.hash = config_hash(to_json(spec));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ScanRow row;
    row.index = i;
    row.axis_value = spec.axis.values[i];
    row.config = grid[i];
    const Job& job = jobs[grid_jobs[i]];
    row.result = job.result;
    row.error = job.error;
    const PointResult* ref = nullptr;
    if (spec.zero_coupling_reference && jobs[ref_jobs[i]].result) ref = &*jobs[ref_jobs[i]].result;
    for (Solver s : spec.solvers) {
      row.columns.push_back(row.result ? columns_for(*row.result, ref, s) : ScanColumns{kNaN, kNaN, kNaN, kNaN});
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

namespace {

std::string header_line() { return std::string("# polariton-scf v") + POLARITON_VERSION + ", schema 1\n"; }

}  // namespace

std::string scan_csv(const ScanResult& result) {
  const ScanSpec& spec = result.spec;
  const bool coupling_axis = spec.axis.name == "coupling_over_omega";
  std::ostringstream out;
  out << header_line();
  out << "index," << spec.axis.name;
  if (!coupling_axis) out << ",coupling_over_omega";
  out << ",lambda";
  for (Solver s : spec.solvers) {
    const std::string p(to_string(s));
    for (const char* col : {"_energy", "_dressed_energy", "_nph_gauge", "_nph_bare", "_dgamma_ref", "_dgamma_ref_per_n",
                            "_dn_ref", "_dgamma_exact", "_max_violation", "_converged"}) {
      out << ',' << p << col;
    }
  }
  out << ",point_ok\n";

  for (const ScanRow& row : result.rows) {
    out << row.index << ',' << format_number(row.axis_value);
    if (!coupling_axis) out << ',' << format_number(row.config.coupling_over_omega);
    out << ',' << format_number(row.result ? row.result->coupling : kNaN);
    for (std::size_t k = 0; k < spec.solvers.size(); ++k) {
      const SolverOutcome* o = row.result ? row.result->find(spec.solvers[k]) : nullptr;
      const bool ok = o && o->ok;
      const ScanColumns& c = row.columns[k];
      out << ',' << format_number(ok ? o->physical_energy : kNaN) << ',' << format_number(ok ? o->dressed_energy : kNaN)
          << ',' << format_number(ok ? o->photons.gauge : kNaN) << ',' << format_number(ok ? o->photons.bare : kNaN)
          << ',' << format_number(c.dgamma_ref) << ',' << format_number(c.dgamma_ref_per_n) << ','
          << format_number(c.dn_ref) << ',' << format_number(c.dgamma_exact) << ','
          << format_number(ok ? o->max_violation : kNaN) << ',' << (ok && o->converged ? 1 : 0);
    }
    out << ',' << (row.result && row.result->succeeded() ? 1 : 0) << '\n';
  }
  return out.str();
}

json scan_manifest(const ScanResult& result, const std::vector<std::string>& point_files) {
  const ScanSpec& spec = result.spec;
  json m;
  m["schema"] = 1;
  m["version"] = POLARITON_VERSION;
  m["config_hash"] = result.hash;
  m["scan"] = to_json(spec);
  m["csv"] = "scan.csv";
  json points = json::array();
  for (const ScanRow& row : result.rows) {
    json p;
    p["index"] = row.index;
    p["axis_value"] = row.axis_value;
    p["file"] = row.index < point_files.size() && !point_files[row.index].empty() ? json(point_files[row.index])
                                                                                 : json(nullptr);
    p["ok"] = row.result && row.result->succeeded();
    if (!row.error.empty()) p["error"] = row.error;
    points.push_back(p);
  }
  m["points"] = points;

  json assertions = json::array();
  if (spec.axis.name == "epsilon" && spec.zero_coupling_reference && result.rows.size() >= 2) {
    const auto lo = std::min_element(result.rows.begin(), result.rows.end(),
                                     [](const ScanRow& a, const ScanRow& b) { return a.axis_value < b.axis_value; });
    const auto hi = std::max_element(result.rows.begin(), result.rows.end(),
                                     [](const ScanRow& a, const ScanRow& b) { return a.axis_value < b.axis_value; });
    for (std::size_t k = 0; k < spec.solvers.size(); ++k) {
      const double a = lo->columns[k].dgamma_ref_per_n;
      const double b = hi->columns[k].dgamma_ref_per_n;
      json item;
      item["name"] = std::string(to_string(spec.solvers[k])) + ".dgamma_ref_per_n increases from smallest to largest epsilon";
      item["epsilon_min"] = lo->axis_value;
      item["epsilon_max"] = hi->axis_value;
      item["value_at_min"] = std::isnan(a) ? json(nullptr) : json(a);
      item["value_at_max"] = std::isnan(b) ? json(nullptr) : json(b);
      item["pass"] = b > a;
      assertions.push_back(item);
    }
  }
  m["assertions"] = assertions;
  return m;
}

std::vector<SpectrumRow> one_body_spectrum(const PointConfig& base, const std::vector<double>& epsilons, int n_levels) {
  if (epsilons.empty()) throw Error(ErrorCode::InvalidScan, "axis.values", "epsilon list is empty");
  std::vector<SpectrumRow> rows;
  for (double eps : epsilons) {
    PointConfig c = base;
    c.potential.kind = PotentialSpec::Kind::SoftCoulomb;
    c.potential.epsilon = eps;
    const CavityLatticeModel model = build_model(c);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(matter_one_body(model), Eigen::EigenvaluesOnly);
    const Index k = std::min<Index>(n_levels, model.n_sites());
    rows.push_back({eps, eig.eigenvalues().head(k)});
  }
  return rows;
}

std::string spectrum_csv(const std::vector<SpectrumRow>& rows) {
  std::ostringstream out;
  out << header_line() << "epsilon";
  const Index k = rows.empty() ? 0 : rows.front().levels.size();
  for (Index i = 0; i < k; ++i) out << ",e" << (i + 1);
  out << '\n';
  for (const auto& r : rows) {
    out << format_number(r.epsilon);
    for (Index i = 0; i < r.levels.size(); ++i) out << ',' << format_number(r.levels[i]);
    out << '\n';
  }
  return out.str();
}

}  // namespace polariton
