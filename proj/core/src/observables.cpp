#include "polariton/observables.hpp"

namespace polariton {

std::string_view to_string(Frame frame) noexcept { return frame == Frame::Physical ? "physical" : "dressed"; }

nlohmann::json EnergyDecomposition::to_json() const {
  return {{"frame", std::string(to_string(frame))},
          {"kinetic", kinetic},
          {"potential", potential},
          {"dipole_self", dipole_self},
          {"bilinear", bilinear},
          {"photon", photon},
          {"total", total()}};
}

namespace {

double expectation(const SparseMatrix& op, const Vector& v) { return v.dot(op * v); }

}  // namespace

EnergyDecomposition decompose_exact(const HamiltonianTerms& terms, const ManyBodyState& state) {
  const Vector& c = state.coefficients;
  const double nn = c.squaredNorm();
  if (std::abs(nn - 1.0) > 1e-8) throw Error(ErrorCode::NotNormalized, "state", "state must be normalised");
  EnergyDecomposition e;
  e.frame = Frame::Physical;
  e.kinetic = expectation(terms.kinetic, c);
  e.potential = expectation(terms.potential, c);
  e.dipole_self = expectation(terms.dipole_self, c);
  e.bilinear = expectation(terms.bilinear, c);
  e.photon = expectation(terms.photon, c);
  return e;
}

EnergyDecomposition decompose_exact(const CavityLatticeModel& model, const ManyBodyState& state) {
  return decompose_exact(assemble_hamiltonian_terms(model, state.basis), state);
}

EnergyDecomposition decompose_dressed(const HfEnergyTerms& t) {
  EnergyDecomposition e;
  e.frame = Frame::Dressed;
  e.kinetic = t.kinetic;
  e.potential = t.potential;
  e.dipole_self = t.dipole_self_one + t.dipole_self_two;
  e.bilinear = t.bilinear_one + t.bilinear_two;
  e.photon = t.photon;
  return e;
}

PhotonNumber photon_number_exact(const CavityLatticeModel& model, const ManyBodyState& state,
                                 const EnergyDecomposition& energy) {
  const DeterminantBasis& basis = state.basis;
  const Vector& c = state.coefficients;
  PhotonNumber n;
  for (Index k = 0; k < basis.n_determinants(); ++k)
    for (int a = 0; a < basis.n_photon(); ++a) n.bare += a * c[basis.index(k, a)] * c[basis.index(k, a)];
  n.gauge = (energy.photon + energy.bilinear + energy.dipole_self) / model.frequency() - 0.5;
  return n;
}

PhotonNumber photon_number_exact(const CavityLatticeModel& model, const ManyBodyState& state) {
  return photon_number_exact(model, state, decompose_exact(model, state));
}

double photon_number_dressed(const CavityLatticeModel& model, const HfEnergyTerms& terms) {
  return (terms.photon + terms.lambda_terms()) / model.frequency() - 0.5 * (model.n_electrons() - 1) - 0.5;
}

double photon_number_dressed(const CavityLatticeModel& model, const ScfSolution& solution) {
  return photon_number_dressed(model, solution.terms);
}

Vector density(const DensityMatrices& dm) { return dm.gamma_e.diagonal(); }

}  // namespace polariton
