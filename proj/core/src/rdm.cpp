#include "polariton/rdm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "polariton/fock_oracle.hpp"

namespace polariton {

void gram_schmidt(Matrix& columns) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Index k = 0; k < columns.cols(); ++k) {
      for (Index j = 0; j < k; ++j) columns.col(k) -= columns.col(j).dot(columns.col(k)) * columns.col(j);
      columns.col(k).normalize();
    }
  }
}

NaturalDecomposition natural_decomposition(const Matrix& gamma) {
  const Index n = gamma.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (gamma + gamma.transpose()));
  const Vector& values = solver.eigenvalues();
  const Matrix& vectors = solver.eigenvectors();

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values[a] > values[b]; });

  NaturalDecomposition out{Vector(n), Matrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    out.occupations[k] = values[order[std::size_t(k)]];
    Vector v = vectors.col(order[std::size_t(k)]);
    Index pivot = 0;
    for (Index i = 1; i < n; ++i) {
      if (std::abs(v[i]) > std::abs(v[pivot]) + 1e-12) pivot = i;
    }
    if (v[pivot] < 0.0) v = -v;
    out.orbitals.col(k) = v;
  }
  return out;
}

Matrix electronic_trace(const Matrix& dressed, int n_sites, int n_photon) {
  Matrix g = Matrix::Zero(n_sites, n_sites);
  for (int i = 0; i < n_sites; ++i)
    for (int j = 0; j < n_sites; ++j)
      for (int a = 0; a < n_photon; ++a)
        g(i, j) += dressed(composite_index(i, a, n_photon), composite_index(j, a, n_photon));
  return g;
}

Matrix photonic_trace(const Matrix& dressed, int n_sites, int n_photon) {
  Matrix g = Matrix::Zero(n_photon, n_photon);
  for (int a = 0; a < n_photon; ++a)
    for (int b = 0; b < n_photon; ++b)
      for (int i = 0; i < n_sites; ++i)
        g(a, b) += dressed(composite_index(i, a, n_photon), composite_index(i, b, n_photon));
  return g;
}

DensityMatrices from_orbitals(const OrbitalSet& orbitals, double tolerance) {
  const double err = orbitals.orthonormality_error();
  if (!(err <= tolerance)) {
    throw Error(ErrorCode::NotOrthonormal, "orbitals",
                "orbital overlap deviates from identity by " + std::to_string(err));
  }
  DensityMatrices dm;
  dm.n_electrons = orbitals.n_electrons();
  const Matrix& c = orbitals.coefficients;
  dm.gamma_dressed = 2.0 * c * c.transpose();
  dm.gamma_e = electronic_trace(dm.gamma_dressed, orbitals.n_sites, orbitals.n_photon);
  dm.gamma_p = photonic_trace(dm.gamma_dressed, orbitals.n_sites, orbitals.n_photon);
  dm.electronic = natural_decomposition(dm.gamma_e);
  dm.photonic = natural_decomposition(dm.gamma_p);
  dm.occ_dressed = natural_decomposition(dm.gamma_dressed).occupations;
  return dm;
}

DensityMatrices from_exact_state(const ManyBodyState& state) {
  const DeterminantBasis& basis = state.basis;
  const double norm = state.coefficients.norm();
  if (state.coefficients.size() != basis.size() || std::abs(norm - 1.0) > 1e-8) {
    throw Error(ErrorCode::NotNormalized, "state", "coefficient vector norm is " + std::to_string(norm));
  }
  const int ns = basis.n_sites();
  const int nb = basis.n_photon();
  const int n_so = basis.n_spin_orbitals();
  const Vector& c = state.coefficients;

  Matrix gamma_e = Matrix::Zero(ns, ns);
  for (Index k = 0; k < basis.n_determinants(); ++k) {
    const std::uint64_t det = basis.determinant(k);
    for (int from = 0; from < n_so; ++from) {
      if (!((det >> from) & 1u)) continue;
      const int spin = from % 2;
      for (int site_to = 0; site_to < ns; ++site_to) {
        const int to = 2 * site_to + spin;
        const HopResult hop = apply_hop(det, from, to);
        if (hop.sign == 0.0) continue;
        const Index k2 = basis.find(hop.det);
        double acc = 0.0;
        for (int a = 0; a < nb; ++a) acc += c[basis.index(k2, a)] * c[basis.index(k, a)];
        // <c^dag_to c_from> contributes to gamma_e[from_site, to_site]
        gamma_e(from / 2, site_to) += hop.sign * acc;
      }
    }
  }

  Matrix gamma_ph = Matrix::Zero(nb, nb);
  for (Index k = 0; k < basis.n_determinants(); ++k)
    for (int a = 0; a < nb; ++a)
      for (int b = 0; b < nb; ++b) gamma_ph(a, b) += c[basis.index(k, a)] * c[basis.index(k, b)];

  DensityMatrices dm;
  dm.n_electrons = basis.n_electrons();
  dm.gamma_e = 0.5 * (gamma_e + gamma_e.transpose());
  dm.gamma_p_physical = gamma_ph;
  dm.gamma_p = double(basis.n_electrons()) * gamma_ph;
  dm.electronic = natural_decomposition(dm.gamma_e);
  dm.photonic = natural_decomposition(dm.gamma_p);
  return dm;
}

bool RepresentabilityReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.pass; });
}

const ConditionResult* RepresentabilityReport::find(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return &c;
  return nullptr;
}

nlohmann::json RepresentabilityReport::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : conditions) {
    out.push_back({{"name", c.name}, {"pass", c.pass}, {"max_violation", c.max_violation}});
  }
  return out;
}

namespace {

ConditionResult bounded(const std::string& name, const Vector& occ, double lower, double upper, double tol) {
  double v = 0.0;
  for (Index i = 0; i < occ.size(); ++i) {
    v = std::max(v, lower - occ[i]);
    v = std::max(v, occ[i] - upper);
  }
  return {name, v <= tol, v};
}

ConditionResult summed(const std::string& name, const Vector& occ, double target, double tol) {
  const double v = std::abs(occ.sum() - target);
  return {name, v <= tol, v};
}

}  // namespace

RepresentabilityReport representability_report(const DensityMatrices& dm, int n_electrons, double tolerance) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  RepresentabilityReport report;
  report.tolerance = tolerance;
  report.conditions.push_back(bounded("electronic_occupation_bounds", dm.occ_e(), 0.0, 2.0, tolerance));
  report.conditions.push_back(summed("electronic_occupation_sum", dm.occ_e(), n_electrons, tolerance));
  report.conditions.push_back(bounded("photonic_occupation_nonnegative", dm.occ_p(), 0.0, inf, tolerance));
  report.conditions.push_back(summed("photonic_occupation_sum", dm.occ_p(), n_electrons, tolerance));
  if (dm.has_dressed()) {
    report.conditions.push_back(bounded("dressed_occupation_bounds", dm.occ_dressed, 0.0, 2.0, tolerance));
  }
  return report;
}

double rdm_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "", "density matrices have different shapes");
  }
  return (a - b).norm();
}

double occupation_distance(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::ShapeMismatch, "", "occupation vectors differ in length");
  return (a - b).cwiseAbs().sum();
}

}  // namespace polariton
