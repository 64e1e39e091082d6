#include "polariton/validation.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "polariton/config.hpp"
#include "polariton/fock_oracle.hpp"
#include "polariton/observables.hpp"

namespace polariton {

bool ValidationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"tolerance", c.tolerance},
                   {"detail", c.detail}});
  }
  return {{"checks", out}, {"all_pass", all_pass()}};
}

double gradient_fd_error(const DressedOperators& ops, const OrbitalSet& orbitals, const ConstraintState& state,
                         double delta) {
  const Matrix analytic = lagrangian_gradient(ops, orbitals, state);
  Matrix numeric(analytic.rows(), analytic.cols());
  OrbitalSet probe = orbitals;
  for (Index j = 0; j < analytic.cols(); ++j) {
    for (Index i = 0; i < analytic.rows(); ++i) {
      const double keep = probe.coefficients(i, j);
      probe.coefficients(i, j) = keep + delta;
      const double up = augmented_lagrangian(ops, probe, state);
      probe.coefficients(i, j) = keep - delta;
      const double down = augmented_lagrangian(ops, probe, state);
      probe.coefficients(i, j) = keep;
      numeric(i, j) = (up - down) / (2.0 * delta);
    }
  }
  return (numeric - analytic).norm() / analytic.norm();
}

namespace {

ValidationCheck check(std::string name, double value, double tol, std::string detail = {}) {
  return {std::move(name), std::abs(value) < tol, value, tol, std::move(detail)};
}

double chain_level(int k, int n_sites, double t) { return -2.0 * t * std::cos(k * std::numbers::pi / (n_sites + 1)); }

PointConfig box6(double omega, double ratio, int n_electrons) {
  PointConfig c;
  c.n_sites = 6;
  c.hopping = 0.5;
  c.omega = omega;
  c.coupling_over_omega = ratio;
  c.n_photon_basis = 5;
  c.n_electrons = n_electrons;
  return c;
}

}  // namespace

ValidationReport run_validation(std::uint64_t seed) {
  ValidationReport report;
  const double e1 = chain_level(1, 6, 0.5);
  const double e2 = chain_level(2, 6, 0.5);

  {
    const CavityLatticeModel m = build_model(box6(0.4, 0.0, 4));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(matter_one_body(m), Eigen::EigenvaluesOnly);
    double dev = 0.0;
    for (int k = 1; k <= 6; ++k) dev = std::max(dev, std::abs(eig.eigenvalues()[k - 1] - chain_level(k, 6, 0.5)));
    report.checks.push_back(check("open_chain_spectrum", dev, 1e-12));

    const ManyBodyState st = solve_exact(m);
    report.checks.push_back(check("uncoupled_exact_energy", st.energy - (2.0 * (e1 + e2) + 0.2), 1e-10));
  }
  {
    ModelParameters p;
    p.n_sites = 6;
    p.hopping = 0.5;
    p.frequency = 0.4;
    p.coupling = coupling_from_ratio(0.2, 0.4);
    p.n_photon_basis = 5;
    p.n_electrons = 1;
    const CavityLatticeModel m = CavityLatticeModel::build(p, true);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(dressed_one_body(m), Eigen::EigenvaluesOnly);
    const ManyBodyState st = solve_exact(m, EigenMethod::Dense);
    report.checks.push_back(check("single_electron_dressed_vs_exact", eig.eigenvalues()[0] - st.energy, 1e-10));
  }
  {
    const CavityLatticeModel m = build_model(box6(0.4, 0.4, 4));
    const DeterminantBasis basis(6, 4, 5);
    const SparseMatrix h = assemble_hamiltonian(m, basis);
    const ManyBodyState dense = ground_state(h, basis, EigenMethod::Dense);
    const ManyBodyState lanczos = ground_state(h, basis, EigenMethod::Lanczos);
    report.checks.push_back(check("dense_vs_lanczos", dense.energy - lanczos.energy, 1e-9));
    report.checks.push_back(check("exact_residual", dense.residual, 1e-9));
  }
  {
    PointConfig c;
    c.n_sites = 4;
    c.omega = 0.4;
    c.coupling_over_omega = 0.4;
    c.n_photon_basis = 6;
    c.n_electrons = 2;
    const CavityLatticeModel m = build_model(c);
    const ManyBodyState st = solve_exact(m);
    const DressedTensor t = dress_two_particle(st);
    const DressedEigenCheck chk = dressed_eigen_check(m, t);
    report.checks.push_back(check("dressing_norm", t.norm() - 1.0, 1e-12));
    report.checks.push_back(check("dressed_energy_offset", chk.energy - (st.energy + 0.5 * m.frequency()), 1e-8));
    report.checks.push_back(check("dressed_residual", chk.residual, 1e-8));
    report.checks.push_back(
        check("cross_frame_photon_number", dressed_photon_number(m, t) - photon_number_exact(m, st).gauge, 1e-8));
  }
  {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ModelParameters p;
    p.n_sites = 3;
    p.frequency = 0.5;
    p.coupling = unit(rng);
    p.n_photon_basis = 2;
    p.n_electrons = 2;
    const CavityLatticeModel m = CavityLatticeModel::build(p);
    const DressedOperators ops = dressed_operators(m);
    std::normal_distribution<double> gauss;
    Matrix coeff(ops.dim, 1);
    for (Index i = 0; i < coeff.size(); ++i) coeff.data()[i] = gauss(rng);
    coeff *= 1.2 / coeff.norm();
    ConstraintState state = ConstraintState::initial(3, 5.0);
    for (Index i = 0; i < 3; ++i) state.multipliers[i] = unit(rng);
    const double err = gradient_fd_error(ops, OrbitalSet{3, 2, coeff}, state);
    report.checks.push_back(check("augmented_lagrangian_gradient", err, 1e-6));
  }
  {
    const CavityLatticeModel m = build_model(box6(0.2, 0.0, 4));
    ScfOptions f;
    f.mode = SolverMode::Fermionic;
    f.seed = seed;
    const ScfSolution fhf = solve(m, f);
    ScfOptions p;
    p.seed = seed;
    const ScfSolution phf = solve(m, p);
    report.checks.push_back(check("fermionic_pauli_violation", fhf.physical_energy - (4.0 * e1 + 2.5 * 0.2), 1e-5,
                                  "max occ_e " + std::to_string(fhf.density.occ_e().maxCoeff())));
    report.checks.push_back(check("polaritonic_pauli_fixture", phf.physical_energy - (2.0 * (e1 + e2) + 0.1), 1e-5));
  }
  return report;
}

}  // namespace polariton
