#include "polariton/model.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace polariton {

double coupling_from_ratio(double coupling_over_omega, double frequency) {
  return coupling_over_omega * std::sqrt(2.0 * frequency);
}

Vector centred_positions(int n_sites, double spacing) {
  Vector x(n_sites);
  const double middle = 0.5 * (n_sites - 1);
  for (int i = 0; i < n_sites; ++i) x[i] = (i - middle) * spacing;
  return x;
}

Vector soft_coulomb_potential(int n_electrons, double epsilon, const Vector& positions) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::NonPositiveEpsilon, "epsilon", "softening length must be positive and finite");
  }
  Vector v(positions.size());
  for (Index i = 0; i < positions.size(); ++i) {
    v[i] = -double(n_electrons) / std::sqrt(positions[i] * positions[i] + epsilon * epsilon);
  }
  return v;
}

CavityLatticeModel CavityLatticeModel::build(const ModelParameters& p, bool single_electron_mode) {
  if (p.n_sites < 2) throw Error(ErrorCode::InvalidSiteCount, "n_sites", "need at least two lattice sites");
  if (p.n_sites > 64) throw Error(ErrorCode::InvalidSiteCount, "n_sites", "at most 64 lattice sites are supported");
  if (!(p.spacing > 0.0) || !std::isfinite(p.spacing)) {
    throw Error(ErrorCode::InvalidSpacing, "spacing", "lattice spacing must be positive");
  }
  if (p.n_modes != 1) throw Error(ErrorCode::InvalidPhotonBasis, "n_modes", "only a single cavity mode is supported");
  if (p.n_photon_basis < 1) throw Error(ErrorCode::InvalidPhotonBasis, "n_photon_basis", "Fock truncation must be >= 1");
  if (!(p.frequency > 0.0) || !std::isfinite(p.frequency)) {
    throw Error(ErrorCode::NonPositiveFrequency, "omega", "mode frequency must be positive");
  }
  if (!(p.coupling >= 0.0) || !std::isfinite(p.coupling)) {
    throw Error(ErrorCode::NegativeCoupling, "coupling", "coupling must be non-negative");
  }
  if (single_electron_mode) {
    if (p.n_electrons != 1) {
      throw Error(ErrorCode::WrongParticleNumber, "n_electrons", "single-electron mode requires N = 1");
    }
  } else {
    if (p.n_electrons < 2 || p.n_electrons % 2 != 0) {
      throw Error(ErrorCode::OddElectronCount, "n_electrons",
                  "spin-restricted treatment needs an even electron count >= 2, got " + std::to_string(p.n_electrons));
    }
    if (p.n_electrons / 2 > p.n_sites) {
      throw Error(ErrorCode::TooManyElectrons, "n_electrons", "N/2 exceeds the number of lattice sites");
    }
  }

  CavityLatticeModel m;
  m.n_sites_ = p.n_sites;
  m.spacing_ = p.spacing;
  m.hopping_ = p.hopping < 0.0 ? 1.0 / (2.0 * p.spacing * p.spacing) : p.hopping;
  if (!std::isfinite(m.hopping_)) throw Error(ErrorCode::InvalidHopping, "hopping", "hopping must be finite");
  if (p.potential.size() == 0) {
    m.potential_ = Vector::Zero(p.n_sites);
  } else {
    if (p.potential.size() != p.n_sites) {
      throw Error(ErrorCode::InvalidPotential, "potential", "potential length must equal n_sites");
    }
    if (!p.potential.allFinite()) throw Error(ErrorCode::InvalidPotential, "potential", "non-finite potential value");
    m.potential_ = p.potential;
  }
  m.positions_ = centred_positions(p.n_sites, p.spacing);
  m.coupling_ = p.coupling;
  m.frequency_ = p.frequency;
  m.n_photon_basis_ = p.n_photon_basis;
  m.n_electrons_ = p.n_electrons;
  return m;
}

double CavityLatticeModel::coupling_over_omega() const noexcept { return coupling_ / std::sqrt(2.0 * frequency_); }

CavityLatticeModel CavityLatticeModel::with_coupling(double coupling) const {
  if (!(coupling >= 0.0) || !std::isfinite(coupling)) {
    throw Error(ErrorCode::NegativeCoupling, "coupling", "coupling must be non-negative");
  }
  CavityLatticeModel copy = *this;
  copy.coupling_ = coupling;
  return copy;
}

Matrix matter_one_body(const CavityLatticeModel& model) {
  const int n = model.n_sites();
  Matrix h = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = model.potential()[i];
    if (i + 1 < n) {
      h(i, i + 1) = -model.hopping();
      h(i + 1, i) = -model.hopping();
    }
  }
  return h;
}

namespace {

// <alpha|q|alpha+1> for q = (a + a^dag) / sqrt(2 omega).
double ladder(int alpha, double omega) { return std::sqrt((alpha + 1) / (2.0 * omega)); }

}  // namespace

Matrix DressedOperators::apply_q(const Matrix& v) const {
  Matrix out = Matrix::Zero(v.rows(), v.cols());
  for (int i = 0; i < n_sites; ++i) {
    for (int a = 0; a + 1 < n_photon; ++a) {
      const Index lo = composite_index(i, a, n_photon);
      const Index hi = lo + 1;
      const double q = ladder(a, omega);
      out.row(lo) += q * v.row(hi);
      out.row(hi) += q * v.row(lo);
    }
  }
  return out;
}

PolaritonOperators polariton_operators(const CavityLatticeModel& model) {
  const int nb = model.n_photon_basis();
  const Index d = model.dressed_dim();
  PolaritonOperators ops{Matrix::Zero(d, d), Matrix::Zero(d, d)};
  for (int i = 0; i < model.n_sites(); ++i) {
    for (int a = 0; a < nb; ++a) {
      const Index k = composite_index(i, a, nb);
      ops.x_op(k, k) = model.positions()[i];
      if (a + 1 < nb) {
        ops.q_op(k, k + 1) = ladder(a, model.frequency());
        ops.q_op(k + 1, k) = ops.q_op(k, k + 1);
      }
    }
  }
  return ops;
}

Matrix dressed_one_body(const CavityLatticeModel& model) {
  const int nb = model.n_photon_basis();
  const int ns = model.n_sites();
  const Index d = model.dressed_dim();
  const double lambda = model.coupling();
  const double omega = model.frequency();
  const double c = lambda * omega / std::sqrt(double(model.n_electrons()));
  const Vector& x = model.positions();

  Matrix h = Matrix::Zero(d, d);
  for (int i = 0; i < ns; ++i) {
    for (int a = 0; a < nb; ++a) {
      const Index k = composite_index(i, a, nb);
      h(k, k) = model.potential()[i] + 0.5 * lambda * lambda * x[i] * x[i] + omega * (a + 0.5);
      if (i + 1 < ns) {
        const Index kn = composite_index(i + 1, a, nb);
        h(k, kn) = -model.hopping();
        h(kn, k) = -model.hopping();
      }
      if (a + 1 < nb) {
        // -c x_i q  ==  -lambda sqrt(omega / 2N) x_i (a + a^dag)
        const double cross = -c * x[i] * ladder(a, omega);
        h(k, k + 1) = cross;
        h(k + 1, k) = cross;
      }
    }
  }
  return h;
}

DressedOperators dressed_operators(const CavityLatticeModel& model) {
  DressedOperators ops;
  ops.n_sites = model.n_sites();
  ops.n_photon = model.n_photon_basis();
  ops.dim = model.dressed_dim();
  ops.lambda = model.coupling();
  ops.omega = model.frequency();
  ops.coupling_const = model.coupling() * model.frequency() / std::sqrt(double(model.n_electrons()));
  ops.h_one = dressed_one_body(model);
  auto pol = polariton_operators(model);
  ops.x_diag = pol.x_op.diagonal();
  ops.q_op = std::move(pol.q_op);
  ops.h_sparse = ops.h_one.sparseView();
  return ops;
}

}  // namespace polariton
