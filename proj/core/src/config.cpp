#include "polariton/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace polariton {

namespace {

using json = nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "n_sites",   "spacing",   "hopping",         "potential",    "coupling_over_omega", "omega",   "n_photon_basis",
      "n_electrons", "max_outer", "max_inner",     "seed",         "initial_penalty",     "perturbation", "solvers"};
  return keys;
}

const json& require(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw Error(ErrorCode::MissingField, key, "required key is missing");
  return *it;
}

double number(const json& v, const char* key) {
  if (!v.is_number()) throw Error(ErrorCode::InvalidValue, key, "expected a number, got " + v.dump());
  return v.get<double>();
}

int integer(const json& v, const char* key) {
  if (!v.is_number_integer()) throw Error(ErrorCode::InvalidValue, key, "expected an integer, got " + v.dump());
  return v.get<int>();
}

PotentialSpec parse_potential(const json& v) {
  PotentialSpec spec;
  if (v.is_string()) {
    if (v.get<std::string>() != "zero") {
      throw Error(ErrorCode::InvalidPotential, "potential", "string form must be \"zero\"");
    }
    return spec;
  }
  if (v.is_array()) {
    spec.kind = PotentialSpec::Kind::Explicit;
    for (const auto& e : v) spec.values.push_back(number(e, "potential"));
    return spec;
  }
  if (v.is_object() && v.size() == 1 && v.contains("soft_coulomb")) {
    const json& sc = v.at("soft_coulomb");
    if (!sc.is_object()) throw Error(ErrorCode::InvalidPotential, "potential", "soft_coulomb must be an object");
    for (const auto& [k, _] : sc.items()) {
      if (k != "epsilon") throw Error(ErrorCode::UnknownKey, "potential.soft_coulomb." + k, "unknown key");
    }
    spec.kind = PotentialSpec::Kind::SoftCoulomb;
    spec.epsilon = number(require(sc, "epsilon"), "potential.soft_coulomb.epsilon");
    return spec;
  }
  throw Error(ErrorCode::InvalidPotential, "potential",
              "expected an array, \"zero\" or {\"soft_coulomb\": {\"epsilon\": ...}}");
}

}  // namespace

std::string_view to_string(Solver s) noexcept {
  switch (s) {
    case Solver::Exact: return "exact";
    case Solver::Phf: return "phf";
    case Solver::Fhf: return "fhf";
  }
  return "?";
}

Solver parse_solver(std::string_view name) {
  if (name == "exact") return Solver::Exact;
  if (name == "phf") return Solver::Phf;
  if (name == "fhf") return Solver::Fhf;
  throw Error(ErrorCode::InvalidValue, "solvers", "unknown solver '" + std::string(name) + "'");
}

namespace {

std::vector<Solver> checked(std::vector<Solver> out) {
  if (out.empty()) throw Error(ErrorCode::InvalidValue, "solvers", "solver set must not be empty");
  std::vector<Solver> sorted = out;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::InvalidValue, "solvers", "solver listed twice");
  }
  // canonical order exact, phf, fhf
  return sorted;
}

}  // namespace

std::vector<Solver> parse_solver_list(std::string_view csv) {
  std::vector<Solver> out;
  std::size_t pos = 0;
  while (pos <= csv.size() && !csv.empty()) {
    const std::size_t comma = csv.find(',', pos);
    const std::string_view item = csv.substr(pos, comma == std::string_view::npos ? csv.npos : comma - pos);
    out.push_back(parse_solver(item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return checked(std::move(out));
}

std::vector<Solver> parse_solver_list(const json& array) {
  if (!array.is_array()) throw Error(ErrorCode::InvalidValue, "solvers", "expected an array of solver names");
  std::vector<Solver> out;
  for (const auto& e : array) {
    if (!e.is_string()) throw Error(ErrorCode::InvalidValue, "solvers", "solver names must be strings");
    out.push_back(parse_solver(e.get<std::string>()));
  }
  return checked(std::move(out));
}

PointConfig parse_point_config(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidValue, "", "configuration must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!known_keys().count(key)) throw Error(ErrorCode::UnknownKey, key, "unknown configuration key");
  }
  PointConfig c;
  c.n_sites = integer(require(doc, "n_sites"), "n_sites");
  c.omega = number(require(doc, "omega"), "omega");
  c.n_photon_basis = integer(require(doc, "n_photon_basis"), "n_photon_basis");
  c.n_electrons = integer(require(doc, "n_electrons"), "n_electrons");
  if (doc.contains("spacing")) c.spacing = number(doc["spacing"], "spacing");
  if (doc.contains("hopping")) c.hopping = number(doc["hopping"], "hopping");
  if (doc.contains("potential")) c.potential = parse_potential(doc["potential"]);
  if (doc.contains("coupling_over_omega")) c.coupling_over_omega = number(doc["coupling_over_omega"], "coupling_over_omega");
  if (doc.contains("max_outer")) c.max_outer = integer(doc["max_outer"], "max_outer");
  if (doc.contains("max_inner")) c.max_inner = integer(doc["max_inner"], "max_inner");
  if (doc.contains("seed")) {
    const json& seed = doc["seed"];
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
      throw Error(ErrorCode::InvalidValue, "seed", "expected a non-negative integer");
    }
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("initial_penalty")) c.initial_penalty = number(doc["initial_penalty"], "initial_penalty");
  if (doc.contains("perturbation")) c.perturbation = number(doc["perturbation"], "perturbation");
  if (doc.contains("solvers")) c.solvers = parse_solver_list(doc["solvers"]);

  if (c.max_outer < 1) throw Error(ErrorCode::InvalidValue, "max_outer", "must be >= 1");
  if (c.max_inner < 1) throw Error(ErrorCode::InvalidValue, "max_inner", "must be >= 1");
  if (!(c.initial_penalty > 0.0)) throw Error(ErrorCode::InvalidValue, "initial_penalty", "must be positive");
  if (!(c.perturbation >= 0.0)) throw Error(ErrorCode::InvalidValue, "perturbation", "must be non-negative");
  return c;
}

json to_json(const PointConfig& c) {
  json doc;
  doc["n_sites"] = c.n_sites;
  doc["spacing"] = c.spacing;
  if (c.hopping) doc["hopping"] = *c.hopping;
  switch (c.potential.kind) {
    case PotentialSpec::Kind::Zero: doc["potential"] = "zero"; break;
    case PotentialSpec::Kind::Explicit: doc["potential"] = c.potential.values; break;
    case PotentialSpec::Kind::SoftCoulomb: doc["potential"] = {{"soft_coulomb", {{"epsilon", c.potential.epsilon}}}}; break;
  }
  doc["coupling_over_omega"] = c.coupling_over_omega;
  doc["omega"] = c.omega;
  doc["n_photon_basis"] = c.n_photon_basis;
  doc["n_electrons"] = c.n_electrons;
  doc["max_outer"] = c.max_outer;
  doc["max_inner"] = c.max_inner;
  doc["seed"] = c.seed;
  doc["initial_penalty"] = c.initial_penalty;
  doc["perturbation"] = c.perturbation;
  json solvers = json::array();
  for (Solver s : c.solvers) solvers.push_back(std::string(to_string(s)));
  doc["solvers"] = solvers;
  return doc;
}

CavityLatticeModel build_model(const PointConfig& c) {
  if (!(c.coupling_over_omega >= 0.0) || !std::isfinite(c.coupling_over_omega)) {
    throw Error(ErrorCode::NegativeCoupling, "coupling_over_omega", "coupling must be non-negative");
  }
  if (!(c.omega > 0.0) || !std::isfinite(c.omega)) {
    throw Error(ErrorCode::NonPositiveFrequency, "omega", "mode frequency must be positive");
  }
  ModelParameters p;
  p.n_sites = c.n_sites;
  p.spacing = c.spacing;
  p.hopping = c.hopping.value_or(-1.0);
  if (c.hopping && !(*c.hopping >= 0.0)) throw Error(ErrorCode::InvalidHopping, "hopping", "hopping must be >= 0");
  p.frequency = c.omega;
  p.coupling = coupling_from_ratio(c.coupling_over_omega, c.omega);
  p.n_photon_basis = c.n_photon_basis;
  p.n_electrons = c.n_electrons;
  if (c.n_sites >= 2 && c.spacing > 0.0) {
    switch (c.potential.kind) {
      case PotentialSpec::Kind::Zero: break;
      case PotentialSpec::Kind::Explicit: p.potential = Eigen::Map<const Vector>(c.potential.values.data(), Index(c.potential.values.size())); break;
      case PotentialSpec::Kind::SoftCoulomb:
        p.potential = soft_coulomb_potential(c.n_electrons, c.potential.epsilon, centred_positions(c.n_sites, c.spacing));
        break;
    }
    if (c.potential.kind == PotentialSpec::Kind::Explicit && c.potential.values.empty()) {
      throw Error(ErrorCode::InvalidPotential, "potential", "potential length must equal n_sites");
    }
  }
  return CavityLatticeModel::build(p);
}

CavityLatticeModel build_model(const json& doc) { return build_model(parse_point_config(doc)); }

ScfOptions scf_options(const PointConfig& c, SolverMode mode) {
  ScfOptions o;
  o.mode = mode;
  o.max_outer = c.max_outer;
  o.max_inner = c.max_inner;
  o.seed = c.seed;
  o.initial_penalty = c.initial_penalty;
  o.perturbation = c.perturbation;
  return o;
}

bool is_scan_axis(std::string_view name) noexcept {
  return name == "coupling_over_omega" || name == "omega" || name == "epsilon" || name == "n_electrons" ||
         name == "n_photon_basis" || name == "spacing";
}

void set_axis_value(PointConfig& c, std::string_view axis, double value) {
  auto as_int = [&](const char* field) {
    if (std::floor(value) != value) throw Error(ErrorCode::InvalidScan, field, "axis values must be integers");
    return int(value);
  };
  if (axis == "coupling_over_omega") {
    c.coupling_over_omega = value;
  } else if (axis == "omega") {
    c.omega = value;
  } else if (axis == "epsilon") {
    if (c.potential.kind != PotentialSpec::Kind::SoftCoulomb) {
      throw Error(ErrorCode::InvalidScan, "epsilon", "an epsilon axis needs a soft_coulomb potential");
    }
    c.potential.epsilon = value;
  } else if (axis == "n_electrons") {
    c.n_electrons = as_int("n_electrons");
  } else if (axis == "n_photon_basis") {
    c.n_photon_basis = as_int("n_photon_basis");
  } else if (axis == "spacing") {
    c.spacing = value;
  } else {
    throw Error(ErrorCode::InvalidScan, std::string(axis), "unsupported scan axis");
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidValue, path, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace polariton
