#include "polariton/fock_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "polariton/lanczos.hpp"

namespace polariton {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(Index n, const Triplets& t) {
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

double dipole(std::uint64_t det, const Vector& x) {
  double d = 0.0;
  while (det) {
    const int p = std::countr_zero(det);
    d += x[p / 2];
    det &= det - 1;
  }
  return d;
}

double potential_energy(std::uint64_t det, const Vector& v) { return dipole(det, v); }

void enforce_sign(Vector& v) {
  Index pivot = 0;
  for (Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[pivot]) + 1e-12) pivot = i;
  }
  if (v[pivot] < 0.0) v = -v;
}

}  // namespace

DeterminantBasis::DeterminantBasis(int n_sites, int n_electrons, int n_photon)
    : n_sites_(n_sites), n_electrons_(n_electrons), n_photon_(n_photon) {
  if (n_sites < 1 || 2 * n_sites > 63) {
    throw Error(ErrorCode::DimensionCapExceeded, "n_sites", "determinant basis supports at most 31 sites");
  }
  if (n_electrons < 1 || n_electrons > 2 * n_sites) {
    throw Error(ErrorCode::WrongParticleNumber, "n_electrons", "electron count does not fit the spin orbitals");
  }
  if (n_photon < 1) throw Error(ErrorCode::InvalidPhotonBasis, "n_photon_basis", "Fock truncation must be >= 1");

  const int n_so = 2 * n_sites;
  const std::uint64_t limit = std::uint64_t(1) << n_so;
  std::uint64_t det = (std::uint64_t(1) << n_electrons) - 1;
  while (det < limit) {
    dets_.push_back(det);
    // next bit permutation with the same popcount
    const std::uint64_t t = det | (det - 1);
    det = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(det) + 1));
  }
}

Index DeterminantBasis::find(std::uint64_t det) const {
  const auto it = std::lower_bound(dets_.begin(), dets_.end(), det);
  if (it == dets_.end() || *it != det) return -1;
  return Index(it - dets_.begin());
}

double DeterminantBasis::dimension(int n_sites, int n_electrons, int n_photon) {
  const int n = 2 * n_sites;
  if (n_electrons < 0 || n_electrons > n) return 0.0;
  double c = 1.0;
  for (int k = 1; k <= n_electrons; ++k) c = c * double(n - n_electrons + k) / double(k);
  return std::round(c) * n_photon;
}

HopResult apply_hop(std::uint64_t det, int from, int to) noexcept {
  const std::uint64_t from_bit = std::uint64_t(1) << from;
  if (!(det & from_bit)) return {det, 0.0};
  if (from == to) return {det, 1.0};
  const std::uint64_t to_bit = std::uint64_t(1) << to;
  if (det & to_bit) return {det, 0.0};

  const std::uint64_t removed = det ^ from_bit;
  // c_from picks up (-1)^(occupied below from); c^dag_to then (-1)^(occupied below to)
  const int below_from = std::popcount(det & (from_bit - 1));
  const int below_to = std::popcount(removed & (to_bit - 1));
  const double sign = ((below_from + below_to) % 2 == 0) ? 1.0 : -1.0;
  return {removed | to_bit, sign};
}

HamiltonianTerms assemble_hamiltonian_terms(const CavityLatticeModel& model, const DeterminantBasis& basis,
                                            Index nonzero_cap) {
  const int ns = basis.n_sites();
  const int nb = basis.n_photon();
  const int ne = basis.n_electrons();
  const Index dim = basis.size();
  const Index nnz_estimate = dim * (2 * Index(ne) + 5);
  if (nnz_estimate > nonzero_cap) {
    throw Error(ErrorCode::DimensionCapExceeded, "n_sites",
                "Hamiltonian would hold about " + std::to_string(nnz_estimate) + " nonzeros (cap " +
                    std::to_string(nonzero_cap) + "); reduce the lattice or photon basis");
  }

  const Vector& x = model.positions();
  const Vector& v = model.potential();
  const double t = model.hopping();
  const double lambda = model.coupling();
  const double omega = model.frequency();
  const double bilinear_prefactor = -lambda * std::sqrt(0.5 * omega);

  Triplets kin, pot, dse, bil, ph;
  kin.reserve(std::size_t(dim) * std::size_t(2 * ne));
  for (Index k = 0; k < basis.n_determinants(); ++k) {
    const std::uint64_t det = basis.determinant(k);
    const double d = dipole(det, x);
    const double vpot = potential_energy(det, v);

    for (int p = 0; p < 2 * ns; ++p) {
      if (!((det >> p) & 1u)) continue;
      const int site = p / 2;
      for (int step : {-1, 1}) {
        const int target = site + step;
        if (target < 0 || target >= ns) continue;
        const HopResult hop = apply_hop(det, p, 2 * target + p % 2);
        if (hop.sign == 0.0) continue;
        const Index k2 = basis.find(hop.det);
        for (int a = 0; a < nb; ++a) kin.emplace_back(basis.index(k2, a), basis.index(k, a), -t * hop.sign);
      }
    }

    for (int a = 0; a < nb; ++a) {
      const Index row = basis.index(k, a);
      if (vpot != 0.0) pot.emplace_back(row, row, vpot);
      if (lambda != 0.0) dse.emplace_back(row, row, 0.5 * lambda * lambda * d * d);
      ph.emplace_back(row, row, omega * (a + 0.5));
      if (a + 1 < nb && lambda != 0.0 && d != 0.0) {
        const double val = bilinear_prefactor * d * std::sqrt(double(a + 1));
        bil.emplace_back(row, row + 1, val);
        bil.emplace_back(row + 1, row, val);
      }
    }
  }

  HamiltonianTerms terms;
  terms.kinetic = from_triplets(dim, kin);
  terms.potential = from_triplets(dim, pot);
  terms.dipole_self = from_triplets(dim, dse);
  terms.bilinear = from_triplets(dim, bil);
  terms.photon = from_triplets(dim, ph);
  return terms;
}

SparseMatrix assemble_hamiltonian(const CavityLatticeModel& model, const DeterminantBasis& basis, Index nonzero_cap) {
  return assemble_hamiltonian_terms(model, basis, nonzero_cap).total();
}

ManyBodyState ground_state(const SparseMatrix& hamiltonian, const DeterminantBasis& basis, EigenMethod method) {
  if (hamiltonian.rows() != basis.size() || hamiltonian.cols() != basis.size()) {
    throw Error(ErrorCode::ShapeMismatch, "hamiltonian", "matrix does not match the basis dimension");
  }
  if (method == EigenMethod::Automatic) {
    method = basis.size() < kDenseThreshold ? EigenMethod::Dense : EigenMethod::Lanczos;
  }
  EigenPair pair = method == EigenMethod::Dense ? dense_lowest(Matrix(hamiltonian)) : lanczos_lowest(hamiltonian);

  ManyBodyState state;
  state.basis = basis;
  state.coefficients = std::move(pair.vector);
  state.coefficients.normalize();
  enforce_sign(state.coefficients);
  state.energy = pair.value;
  state.residual = (hamiltonian * state.coefficients - state.energy * state.coefficients).norm();
  return state;
}

ManyBodyState solve_exact(const CavityLatticeModel& model, EigenMethod method, Index nonzero_cap) {
  const double dim = DeterminantBasis::dimension(model.n_sites(), model.n_electrons(), model.n_photon_basis());
  if (dim * (2.0 * model.n_electrons() + 5.0) > double(nonzero_cap)) {
    throw Error(ErrorCode::DimensionCapExceeded, "n_sites",
                "exact basis of dimension " + std::to_string(std::llround(dim)) + " exceeds the nonzero cap");
  }
  DeterminantBasis basis(model.n_sites(), model.n_electrons(), model.n_photon_basis());
  return ground_state(assemble_hamiltonian(model, basis, nonzero_cap), basis, method);
}

double DressedTensor::norm() const {
  double s = 0.0;
  for (double v : data) s += v * v;
  return std::sqrt(s);
}

double dressing_weight(int alpha, int beta) {
  if (beta < 0 || beta > alpha) return 0.0;
  const double log_binom = std::lgamma(alpha + 1.0) - std::lgamma(beta + 1.0) - std::lgamma(alpha - beta + 1.0);
  return std::exp(0.5 * log_binom - 0.5 * alpha * std::log(2.0));
}

DressedTensor dress_two_particle(const ManyBodyState& state) {
  const DeterminantBasis& basis = state.basis;
  if (basis.n_electrons() != 2) {
    throw Error(ErrorCode::WrongParticleNumber, "n_electrons", "the dressing transform is defined for N = 2 only");
  }
  const int n_so = basis.n_spin_orbitals();
  const int nb = basis.n_photon();
  DressedTensor out;
  out.n_spin_orbitals = n_so;
  out.n_photon = nb;
  out.data.assign(std::size_t(n_so) * n_so * nb * nb, 0.0);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (Index k = 0; k < basis.n_determinants(); ++k) {
    const std::uint64_t det = basis.determinant(k);
    const int p = std::countr_zero(det);
    const int q = 63 - std::countl_zero(det);
    for (int a = 0; a < nb; ++a) {
      const double c = state.coefficients[basis.index(k, a)] * inv_sqrt2;
      if (c == 0.0) continue;
      for (int b = 0; b <= a; ++b) {
        const double w = dressing_weight(a, b);
        out.at(p, q, a - b, b) += c * w;
        out.at(q, p, a - b, b) -= c * w;
      }
    }
  }
  return out;
}

namespace {

struct DressedPieces {
  Matrix h_one;     // full one-polariton h' at N = 2
  Matrix photon;    // omega (b + 1/2)
  Matrix coupling;  // lambda^2 x^2 / 2 - c x q
  Vector x;         // site positions
  Matrix q_fock;    // Q restricted to the Fock index
  double lambda = 0.0;
  double c = 0.0;
};

DressedPieces dressed_pieces(const CavityLatticeModel& model) {
  ModelParameters p;
  p.n_sites = model.n_sites();
  p.spacing = model.spacing();
  p.hopping = model.hopping();
  p.potential = model.potential();
  p.coupling = model.coupling();
  p.frequency = model.frequency();
  p.n_photon_basis = model.n_photon_basis();
  p.n_electrons = 2;
  const CavityLatticeModel pair = CavityLatticeModel::build(p);

  const int ns = pair.n_sites();
  const int nb = pair.n_photon_basis();
  const double omega = pair.frequency();
  const double lambda = pair.coupling();
  const DressedOperators ops = dressed_operators(pair);

  DressedPieces out;
  out.h_one = ops.h_one;
  out.lambda = lambda;
  out.c = ops.coupling_const;
  out.x = pair.positions();
  out.q_fock = Matrix::Zero(nb, nb);
  for (int a = 0; a + 1 < nb; ++a) {
    out.q_fock(a, a + 1) = out.q_fock(a + 1, a) = std::sqrt((a + 1) / (2.0 * omega));
  }
  const Index d = ops.dim;
  out.photon = Matrix::Zero(d, d);
  for (int i = 0; i < ns; ++i)
    for (int a = 0; a < nb; ++a) out.photon(composite_index(i, a, nb), composite_index(i, a, nb)) = omega * (a + 0.5);
  out.coupling = Matrix::Zero(d, d);
  for (int i = 0; i < ns; ++i) {
    const double xi = out.x[i];
    for (int a = 0; a < nb; ++a) {
      const Index r = composite_index(i, a, nb);
      out.coupling(r, r) = 0.5 * lambda * lambda * xi * xi;
      for (int b = 0; b < nb; ++b) {
        if (out.q_fock(a, b) != 0.0) out.coupling(r, composite_index(i, b, nb)) = -out.c * xi * out.q_fock(a, b);
      }
    }
  }
  return out;
}

// One-body operator `h` (on (site, Fock)) acting on both polaritons; spin is
// carried by the spin-orbital index and left untouched.
std::vector<double> apply_one_body(const DressedTensor& t, const Matrix& h) {
  const int n_so = t.n_spin_orbitals;
  const int nb = t.n_photon;
  std::vector<double> out(t.data.size(), 0.0);
  for (int p = 0; p < n_so; ++p)
    for (int q = 0; q < n_so; ++q)
      for (int b1 = 0; b1 < nb; ++b1)
        for (int b2 = 0; b2 < nb; ++b2) {
          const Index r1 = composite_index(p / 2, b1, nb);
          const Index r2 = composite_index(q / 2, b2, nb);
          double acc = 0.0;
          for (int p2 = p % 2; p2 < n_so; p2 += 2)
            for (int c1 = 0; c1 < nb; ++c1) {
              const double h1 = h(r1, composite_index(p2 / 2, c1, nb));
              if (h1 != 0.0) acc += h1 * t.at(p2, q, c1, b2);
            }
          for (int q2 = q % 2; q2 < n_so; q2 += 2)
            for (int c2 = 0; c2 < nb; ++c2) {
              const double h2 = h(r2, composite_index(q2 / 2, c2, nb));
              if (h2 != 0.0) acc += h2 * t.at(p, q2, b1, c2);
            }
          out[t.offset(p, q, b1, b2)] = acc;
        }
  return out;
}

// lambda^2 X1 X2 - c (Q1 X2 + X1 Q2)
std::vector<double> apply_two_body(const DressedTensor& t, const DressedPieces& pc) {
  const int n_so = t.n_spin_orbitals;
  const int nb = t.n_photon;
  std::vector<double> out(t.data.size(), 0.0);
  for (int p = 0; p < n_so; ++p)
    for (int q = 0; q < n_so; ++q) {
      const double x1 = pc.x[p / 2];
      const double x2 = pc.x[q / 2];
      for (int b1 = 0; b1 < nb; ++b1)
        for (int b2 = 0; b2 < nb; ++b2) {
          double acc = pc.lambda * pc.lambda * x1 * x2 * t.at(p, q, b1, b2);
          for (int c = 0; c < nb; ++c) {
            acc -= pc.c * x2 * pc.q_fock(b1, c) * t.at(p, q, c, b2);
            acc -= pc.c * x1 * pc.q_fock(b2, c) * t.at(p, q, b1, c);
          }
          out[t.offset(p, q, b1, b2)] = acc;
        }
    }
  return out;
}

void project_truncation(const DressedTensor& t, std::vector<double>& v) {
  const int n_so = t.n_spin_orbitals;
  const int nb = t.n_photon;
  for (int p = 0; p < n_so; ++p)
    for (int q = 0; q < n_so; ++q)
      for (int b1 = 0; b1 < nb; ++b1)
        for (int b2 = nb - b1; b2 < nb; ++b2) v[t.offset(p, q, b1, b2)] = 0.0;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

DressedEigenCheck dressed_eigen_check(const CavityLatticeModel& model, const DressedTensor& tensor) {
  const DressedPieces pc = dressed_pieces(model);
  std::vector<double> hv = apply_one_body(tensor, pc.h_one);
  const std::vector<double> two = apply_two_body(tensor, pc);
  for (std::size_t i = 0; i < hv.size(); ++i) hv[i] += two[i];
  project_truncation(tensor, hv);

  DressedEigenCheck out;
  const double nn = dot(tensor.data, tensor.data);
  out.norm = std::sqrt(nn);
  out.energy = dot(tensor.data, hv) / nn;
  double r = 0.0;
  for (std::size_t i = 0; i < hv.size(); ++i) {
    const double d = hv[i] - out.energy * tensor.data[i];
    r += d * d;
  }
  out.residual = std::sqrt(r / nn);
  return out;
}

double dressed_photon_number(const CavityLatticeModel& model, const DressedTensor& tensor) {
  const DressedPieces pc = dressed_pieces(model);
  std::vector<double> hv = apply_one_body(tensor, pc.photon + pc.coupling);
  const std::vector<double> two = apply_two_body(tensor, pc);
  for (std::size_t i = 0; i < hv.size(); ++i) hv[i] += two[i];
  const double expectation = dot(tensor.data, hv) / dot(tensor.data, tensor.data);
  return expectation / model.frequency() - 0.5 - 0.5;
}

}  // namespace polariton
