#include "polariton/scf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

namespace polariton {

std::string_view to_string(SolverMode mode) noexcept {
  return mode == SolverMode::Polaritonic ? "polaritonic" : "fermionic";
}

ConstraintState ConstraintState::inactive(int n_sites) {
  ConstraintState s;
  s.multipliers = Vector::Zero(n_sites);
  s.g_values = Vector::Constant(n_sites, 2.0);
  s.penalty = 0.0;
  return s;
}

ConstraintState ConstraintState::initial(int n_sites, double penalty) {
  ConstraintState s = inactive(n_sites);
  s.penalty = penalty;
  return s;
}

double ConstraintState::weight(Index slot, double g) const {
  const double lambda = slot < multipliers.size() ? multipliers[slot] : 0.0;
  return lambda + penalty * negative_part(g);
}

double physical_from_dressed(double dressed_energy, int n_electrons, double omega) noexcept {
  return dressed_energy - 0.5 * (n_electrons - 1) * omega;
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Matrix electronic_gamma(const DressedOperators& ops, const Matrix& c) {
  Matrix g = Matrix::Zero(ops.n_sites, ops.n_sites);
  for (Index a = 0; a < c.cols(); ++a) {
    Eigen::Map<const RowMajor> phi(c.col(a).data(), ops.n_sites, ops.n_photon);
    g.noalias() += 2.0 * phi * phi.transpose();
  }
  return g;
}

Vector g_from(const NaturalDecomposition& nat) { return Vector::Constant(nat.occupations.size(), 2.0) - nat.occupations; }

double violation_of(const Vector& g) {
  double v = 0.0;
  for (Index i = 0; i < g.size(); ++i) v = std::max(v, negative_part(g[i]));
  return v;
}

// Site-space operator P = 2 sum_i w_i psi_i psi_i^T; G phi(., alpha) = P phi(., alpha).
Matrix constraint_projector(const NaturalDecomposition& nat, const ConstraintState& state) {
  const Vector g = g_from(nat);
  const Index n = g.size();
  Vector w(n);
  for (Index i = 0; i < n; ++i) w[i] = state.weight(i, g[i]);
  return 2.0 * nat.orbitals * w.asDiagonal() * nat.orbitals.transpose();
}

Matrix apply_site_operator(const DressedOperators& ops, const Matrix& p, const Matrix& block) {
  Matrix out(block.rows(), block.cols());
  for (Index k = 0; k < block.cols(); ++k) {
    Eigen::Map<const RowMajor> phi(block.col(k).data(), ops.n_sites, ops.n_photon);
    Eigen::Map<RowMajor> res(out.col(k).data(), ops.n_sites, ops.n_photon);
    res.noalias() = p * phi;
  }
  return out;
}

struct Evaluation {
  double lagrangian = 0.0;
  double energy = 0.0;
  NaturalDecomposition natural;
  double violation = 0.0;
};

Evaluation evaluate(const DressedOperators& ops, const Matrix& c, const ConstraintState& state) {
  OrbitalSet o{ops.n_sites, ops.n_photon, c};
  Evaluation e;
  e.energy = hf_energy(ops, o);
  e.natural = natural_decomposition(electronic_gamma(ops, c));
  const Vector g = g_from(e.natural);
  e.violation = violation_of(g);
  e.lagrangian = e.energy;
  for (Index i = 0; i < g.size(); ++i) {
    const double lambda = i < state.multipliers.size() ? state.multipliers[i] : 0.0;
    const double neg = negative_part(g[i]);
    e.lagrangian += -lambda * g[i] + 0.5 * state.penalty * neg * neg;
  }
  return e;
}

// phi^* gradient: F C + sum_i w_i G_i C
Matrix half_gradient(const DressedOperators& ops, const Matrix& c, const Evaluation& e, const ConstraintState& state) {
  OrbitalSet o{ops.n_sites, ops.n_photon, c};
  Matrix g = fock_apply_block(ops, o, c);
  if (state.enabled()) g += apply_site_operator(ops, constraint_projector(e.natural, state), c);
  return g;
}

Matrix tangent(const Matrix& c, const Matrix& v) { return v - c * (c.transpose() * v); }

Matrix retract(const Matrix& c, const Matrix& d, double theta) {
  Matrix out = c + theta * d;
  gram_schmidt(out);
  return out;
}

}  // namespace

HfEnergyTerms hf_energy_terms(const DressedOperators& ops, const OrbitalSet& orbitals) {
  const Matrix& c = orbitals.coefficients;
  const Matrix xc = ops.apply_x(c);
  const Matrix qc = ops.apply_q(c);
  const Matrix hc = ops.apply_h(c);
  const Matrix xm = c.transpose() * xc;
  const Matrix qm = c.transpose() * qc;
  const double lambda2 = ops.lambda * ops.lambda;
  const double cc = ops.coupling_const;

  HfEnergyTerms t;
  double one_body = 0.0;
  for (Index a = 0; a < c.cols(); ++a) {
    one_body += 2.0 * c.col(a).dot(hc.col(a));
    for (int i = 0; i < ops.n_sites; ++i) {
      const double x = ops.x_diag[composite_index(i, 0, ops.n_photon)];
      for (int al = 0; al < ops.n_photon; ++al) {
        const Index k = composite_index(i, al, ops.n_photon);
        const double w = 2.0 * c(k, a) * c(k, a);
        const double photon = ops.omega * (al + 0.5);
        const double dse = 0.5 * lambda2 * x * x;
        t.photon += w * photon;
        t.dipole_self_one += w * dse;
        t.potential += w * (ops.h_one(k, k) - photon - dse);
      }
    }
    t.bilinear_one += -2.0 * cc * xc.col(a).dot(qc.col(a));
  }
  t.kinetic = one_body - t.potential - t.photon - t.dipole_self_one - t.bilinear_one;

  const double tr_x = xm.trace();
  const double tr_q = qm.trace();
  t.dipole_self_two = lambda2 * (2.0 * tr_x * tr_x - xm.squaredNorm());
  t.bilinear_two = -4.0 * cc * tr_q * tr_x + 2.0 * cc * qm.cwiseProduct(xm).sum();
  return t;
}

double hf_energy(const DressedOperators& ops, const OrbitalSet& orbitals) {
  return hf_energy_terms(ops, orbitals).total();
}

Matrix fock_apply_block(const DressedOperators& ops, const OrbitalSet& orbitals, const Matrix& block) {
  const Matrix& c = orbitals.coefficients;
  const double lambda2 = ops.lambda * ops.lambda;
  const double cc = ops.coupling_const;

  Matrix out = 2.0 * ops.apply_h(block);
  if (lambda2 == 0.0 && cc == 0.0) return out;

  const Matrix xc = ops.apply_x(c);
  const Matrix qc = ops.apply_q(c);
  const double tr_x = c.cwiseProduct(xc).sum();
  const double tr_q = c.cwiseProduct(qc).sum();
  const Matrix xb = ops.apply_x(block);
  const Matrix qb = ops.apply_q(block);

  const Matrix coulomb = lambda2 * tr_x * xb - cc * (tr_q * xb + tr_x * qb);
  const Matrix xc_t_b = xc.transpose() * block;  // <X phi_b | v>
  const Matrix qc_t_b = qc.transpose() * block;  // <Q phi_b | v>
  const Matrix exchange = lambda2 * xc * xc_t_b - cc * (qc * xc_t_b + xc * qc_t_b);
  out += 2.0 * (2.0 * coulomb - exchange);
  return out;
}

Vector fock_apply(const DressedOperators& ops, const OrbitalSet& orbitals, const Vector& phi) {
  return fock_apply_block(ops, orbitals, phi).col(0);
}

Vector constraint_values(const DensityMatrices& dm) { return g_from(dm.electronic); }

double max_violation(const DensityMatrices& dm) { return violation_of(constraint_values(dm)); }

Matrix constraint_gradient_block(const DensityMatrices& dm, const ConstraintState& state, const Matrix& block) {
  const int n_sites = int(dm.gamma_e.rows());
  const int n_photon = int(block.rows() / std::max(n_sites, 1));
  DressedOperators shape;
  shape.n_sites = n_sites;
  shape.n_photon = n_photon;
  return apply_site_operator(shape, constraint_projector(dm.electronic, state), block);
}

Vector constraint_gradient(const DensityMatrices& dm, const ConstraintState& state, const Vector& phi) {
  return constraint_gradient_block(dm, state, phi).col(0);
}

double augmented_lagrangian(const DressedOperators& ops, const OrbitalSet& orbitals, const ConstraintState& state) {
  return evaluate(ops, orbitals.coefficients, state).lagrangian;
}

Matrix lagrangian_gradient(const DressedOperators& ops, const OrbitalSet& orbitals, const ConstraintState& state) {
  const Evaluation e = evaluate(ops, orbitals.coefficients, state);
  return 2.0 * half_gradient(ops, orbitals.coefficients, e, state);
}

InnerResult inner_minimize(const DressedOperators& ops, const OrbitalSet& start, const ConstraintState& state,
                           double tol, int max_iterations, const TraceSink& trace, int outer_index) {
  Matrix c = start.coefficients;
  gram_schmidt(c);
  Evaluation cur = evaluate(ops, c, state);
  Matrix gp = tangent(c, half_gradient(ops, c, cur, state));
  Matrix gp_prev;
  Matrix dir;
  const Index restart = std::max<Index>(ops.dim, 1);
  double theta_trial = 0.5;

  InnerResult res;
  int it = 0;
  for (;; ++it) {
    const double gnorm = gp.norm();
    if (trace) trace({outer_index, it, cur.energy, gnorm, cur.violation, state.penalty});
    res.gradient_norm = gnorm;
    if (gnorm < tol) {
      res.converged = true;
      break;
    }
    if (it >= max_iterations) break;

    if (it % restart == 0 || dir.size() == 0) {
      dir = -gp;
    } else {
      const double denom = gp_prev.squaredNorm();
      const double beta = denom > 0.0 ? std::max(0.0, gp.cwiseProduct(gp - gp_prev).sum() / denom) : 0.0;
      dir = -gp + beta * tangent(c, dir);
    }
    double slope = 2.0 * gp.cwiseProduct(dir).sum();
    if (!(slope < 0.0)) {
      dir = -gp;
      slope = -2.0 * gnorm * gnorm;
    }

    // quadratic model L(theta) = L0 + slope theta + a theta^2 from one trial point
    const double l0 = cur.lagrangian;
    const double theta_t = theta_trial;
    Matrix c_t = retract(c, dir, theta_t);
    Evaluation e_t = evaluate(ops, c_t, state);
    double best_theta = 0.0;
    Matrix best_c;
    Evaluation best_e;
    if (e_t.lagrangian < l0) {
      best_theta = theta_t;
      best_c = c_t;
      best_e = e_t;
    }
    const double curvature = (e_t.lagrangian - l0 - slope * theta_t) / (theta_t * theta_t);
    if (curvature > 0.0) {
      const double theta_q = std::min(-slope / (2.0 * curvature), 100.0 * theta_t);
      Matrix c_q = retract(c, dir, theta_q);
      Evaluation e_q = evaluate(ops, c_q, state);
      if (e_q.lagrangian < l0 && (best_theta == 0.0 || e_q.lagrangian <= best_e.lagrangian)) {
        best_theta = theta_q;
        best_c = std::move(c_q);
        best_e = std::move(e_q);
      }
    }
    if (best_theta == 0.0) {
      double theta = 0.5 * theta_t;
      for (int k = 0; k < 60; ++k, theta *= 0.5) {
        Matrix c_b = retract(c, dir, theta);
        Evaluation e_b = evaluate(ops, c_b, state);
        if (e_b.lagrangian < l0) {
          best_theta = theta;
          best_c = std::move(c_b);
          best_e = std::move(e_b);
          break;
        }
      }
    }
    if (best_theta == 0.0) {
      res.stalled = true;
      break;
    }

    theta_trial = std::clamp(best_theta, 1e-3, 10.0);
    c = std::move(best_c);
    cur = std::move(best_e);
    gp_prev = std::move(gp);
    gp = tangent(c, half_gradient(ops, c, cur, state));
  }

  res.orbitals = OrbitalSet{ops.n_sites, ops.n_photon, c};
  res.lagrangian = cur.lagrangian;
  res.iterations = it;
  return res;
}

OrbitalSet initial_orbitals(const CavityLatticeModel& model, const DressedOperators& ops, double perturbation,
                            std::uint64_t seed) {
  const NaturalDecomposition eig = natural_decomposition(-ops.h_one);  // descending in -h' = ascending in h'
  const Index m = model.n_occupied();
  Matrix c = eig.orbitals.leftCols(m);
  if (perturbation > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    for (Index j = 0; j < c.cols(); ++j)
      for (Index i = 0; i < c.rows(); ++i) c(i, j) += perturbation * gauss(rng);
  }
  gram_schmidt(c);
  return OrbitalSet{model.n_sites(), model.n_photon_basis(), c};
}

ScfSolution solve(const CavityLatticeModel& model, const ScfOptions& options) {
  const DressedOperators ops = dressed_operators(model);
  OrbitalSet orbitals = initial_orbitals(model, ops, options.perturbation, options.seed);

  ScfSolution sol;
  sol.mode = options.mode;

  if (options.mode == SolverMode::Fermionic) {
    sol.constraints = ConstraintState::inactive(model.n_sites());
    const InnerResult inner =
        inner_minimize(ops, orbitals, sol.constraints, options.fermionic_tol, options.max_inner, options.trace, 0);
    orbitals = inner.orbitals;
    sol.converged = inner.converged;
    sol.outer_iterations = 1;
    sol.inner_iterations = inner.iterations;
    sol.gradient_norm = inner.gradient_norm;
  } else {
    ConstraintState state = ConstraintState::initial(model.n_sites(), options.initial_penalty);
    state.inner_tol = options.initial_inner_tol;
    state.constraint_tol = options.initial_constraint_tol;
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (int outer = 1; outer <= options.max_outer; ++outer) {
      const InnerResult inner =
          inner_minimize(ops, orbitals, state, state.inner_tol, options.max_inner, options.trace, outer);
      orbitals = inner.orbitals;
      sol.outer_iterations = outer;
      sol.inner_iterations += inner.iterations;
      sol.gradient_norm = inner.gradient_norm;

      const DensityMatrices dm = from_orbitals(orbitals);
      const Vector g = constraint_values(dm);
      state.g_values = g;
      const double violation = violation_of(g);
      const double energy = hf_energy(ops, orbitals);
      const double change = std::isnan(previous) ? std::numeric_limits<double>::infinity() : std::abs(energy - previous);
      previous = energy;

      if (violation <= state.constraint_tol) {
        const bool at_floor = state.inner_tol <= options.inner_tol_floor;
        if (std::max(inner.gradient_norm, change) < options.convergence_tol && violation < options.violation_tol &&
            at_floor && inner.converged) {
          sol.converged = true;
          break;
        }
        for (Index i = 0; i < g.size(); ++i) {
          state.multipliers[i] = std::max(state.multipliers[i] - state.penalty * g[i], 0.0);
        }
        state.constraint_tol /= std::pow(state.penalty, 0.9);
        state.inner_tol = std::max(state.inner_tol * options.inner_tol_factor, options.inner_tol_floor);
      } else {
        state.penalty = std::min(state.penalty * options.penalty_growth, options.max_penalty);
        state.constraint_tol =
            options.initial_constraint_tol * std::pow(state.penalty / options.initial_penalty, -0.1);
      }
    }
    sol.constraints = state;
  }

  sol.orbitals = orbitals;
  sol.terms = hf_energy_terms(ops, orbitals);
  sol.dressed_energy = sol.terms.total();
  sol.physical_energy = physical_from_dressed(sol.dressed_energy, model.n_electrons(), model.frequency());
  sol.density = from_orbitals(orbitals);
  sol.max_violation = max_violation(sol.density);
  sol.constraints.g_values = constraint_values(sol.density);
  return sol;
}

}  // namespace polariton
