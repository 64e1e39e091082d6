#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "polariton/fock_oracle.hpp"
#include "polariton/scf.hpp"

using namespace polariton;

namespace {

struct Instance {
  CavityLatticeModel model;
  DressedOperators ops;
  oracle::Dressed ref;
};

Instance make(int ns, int nb, int n, double lambda, double omega, std::uint64_t seed = 0, bool random_v = false) {
  ModelParameters p;
  p.n_sites = ns;
  p.hopping = 0.5;
  p.frequency = omega;
  p.coupling = lambda;
  p.n_photon_basis = nb;
  p.n_electrons = n;
  if (random_v) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    p.potential = Vector::NullaryExpr(ns, [&] { return u(rng); });
  }
  const auto m = CavityLatticeModel::build(p);
  return {m, dressed_operators(m),
          oracle::dressed(ns, nb, 0.5, random_v ? p.potential : Vector::Zero(ns), lambda, omega, n)};
}

ModelParameters box6(double omega, double ratio) {
  ModelParameters p;
  p.n_sites = 6;
  p.hopping = 0.5;
  p.frequency = omega;
  p.coupling = coupling_from_ratio(ratio, omega);
  p.n_photon_basis = 5;
  p.n_electrons = 4;
  return p;
}

// Central differences of f over every coefficient of c.
template <class F>
Matrix numeric_gradient(F f, Matrix c, double h = 1e-5) {
  Matrix g(c.rows(), c.cols());
  for (Index i = 0; i < c.size(); ++i) {
    const double keep = c.data()[i];
    c.data()[i] = keep + h;
    const double up = f(c);
    c.data()[i] = keep - h;
    const double down = f(c);
    c.data()[i] = keep;
    g.data()[i] = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace

TEST(HfEnergy, MatchesSlaterDeterminantExpectation) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Instance in = make(3, 2, 2, u(rng), 0.5, trial, true);
    const Matrix c = oracle::random_orthonormal(6, 1, 100 + trial);
    const double lib = hf_energy(in.ops, OrbitalSet{3, 2, c});
    EXPECT_NEAR(lib, oracle::slater_expectation(in.ref, c.col(0)), 1e-12) << trial;
  }
}

TEST(HfEnergy, MatchesFourIndexContractionForTwoOrbitals) {
  const Instance in = make(3, 2, 4, 0.7, 0.6, 3, true);
  const Matrix c = oracle::random_orthonormal(6, 2, 8);
  EXPECT_NEAR(hf_energy(in.ops, OrbitalSet{3, 2, c}), oracle::closed_shell_energy(in.ref, c), 1e-12);
}

TEST(HfEnergy, TermsSumToTotal) {
  const Instance in = make(5, 3, 4, 0.4, 0.4, 1, true);
  const OrbitalSet orb{5, 3, oracle::random_orthonormal(15, 2, 2)};
  const HfEnergyTerms t = hf_energy_terms(in.ops, orb);
  EXPECT_NEAR(t.total(), hf_energy(in.ops, orb), 1e-12);
  EXPECT_NEAR(t.photon, 2.0 * (orb.coefficients.transpose() *
                               Vector::NullaryExpr(15, [](Index k) { return 0.4 * (k % 3 + 0.5); }).asDiagonal() *
                               orb.coefficients).trace(),
              1e-12);
}

TEST(HfEnergy, PhysicalEnergySubtractsAuxiliaryVacuum) {
  EXPECT_DOUBLE_EQ(physical_from_dressed(1.0, 4, 0.4), 1.0 - 1.5 * 0.4);
  EXPECT_DOUBLE_EQ(physical_from_dressed(1.0, 2, 0.2), 0.9);
}

TEST(Fock, MatchesDenseAssembly) {
  const Instance in = make(4, 3, 4, 0.8, 0.5, 4, true);
  const Matrix c = oracle::random_orthonormal(12, 2, 5);
  const OrbitalSet orb{4, 3, c};
  const Matrix f = oracle::dense_fock(in.ref, c);
  const Matrix probe = oracle::random_orthonormal(12, 4, 6);
  EXPECT_LT((fock_apply_block(in.ops, orb, probe) - f * probe).norm(), 1e-12);
  EXPECT_LT((fock_apply(in.ops, orb, probe.col(0)) - f * probe.col(0)).norm(), 1e-12);
}

TEST(Fock, IsHalfTheEnergyGradient) {
  const Instance in = make(3, 3, 4, 0.6, 0.4, 7, true);
  const Matrix c = oracle::random_orthonormal(9, 2, 9);
  const OrbitalSet orb{3, 3, c};
  const Matrix numeric =
      numeric_gradient([&](const Matrix& m) { return oracle::closed_shell_energy(in.ref, m); }, c);
  const Matrix analytic = 2.0 * fock_apply_block(in.ops, orb, c);
  EXPECT_LT((numeric - analytic).norm() / analytic.norm(), 1e-8);
}

TEST(Constraints, ValuesFollowDescendingOccupations) {
  const Matrix c = oracle::random_orthonormal(12, 2, 3);
  const DensityMatrices dm = from_orbitals(OrbitalSet{4, 3, c});
  const Vector g = constraint_values(dm);
  for (Index i = 0; i < 4; ++i) EXPECT_NEAR(g[i], 2.0 - dm.occ_e()[i], 1e-15);
  EXPECT_NEAR(max_violation(dm), std::max(0.0, -g.minCoeff()), 1e-15);
}

TEST(Constraints, GradientIsSiteProjectorTimesWeights) {
  const Matrix c = oracle::random_orthonormal(12, 2, 13);
  const DensityMatrices dm = from_orbitals(OrbitalSet{4, 3, c});
  ConstraintState st = ConstraintState::initial(4, 3.0);
  st.multipliers << 0.3, 0.1, 0.0, 0.7;
  const Vector g = constraint_values(dm);
  Matrix p = Matrix::Zero(4, 4);
  for (Index i = 0; i < 4; ++i) {
    const double w = st.multipliers[i] + st.penalty * negative_part(g[i]);
    p += 2.0 * w * dm.electronic.orbitals.col(i) * dm.electronic.orbitals.col(i).transpose();
  }
  Matrix expected(12, 2);
  for (Index b = 0; b < 2; ++b)
    for (int i = 0; i < 4; ++i)
      for (int a = 0; a < 3; ++a) {
        double s = 0.0;
        for (int j = 0; j < 4; ++j) s += p(i, j) * c(j * 3 + a, b);
        expected(i * 3 + a, b) = s;
      }
  EXPECT_LT((constraint_gradient_block(dm, st, c) - expected).norm(), 1e-13);
  EXPECT_LT((constraint_gradient(dm, st, c.col(1)) - expected.col(1)).norm(), 1e-13);
}

TEST(AugmentedLagrangian, ReducesToEnergyWhenInactive) {
  const Instance in = make(4, 2, 4, 0.5, 0.4);
  const OrbitalSet orb{4, 2, oracle::random_orthonormal(8, 2, 1)};
  EXPECT_NEAR(augmented_lagrangian(in.ops, orb, ConstraintState::inactive(4)), hf_energy(in.ops, orb), 1e-13);
}

TEST(AugmentedLagrangian, GradientMatchesCentralDifferencesOnRandomInstances) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    const Instance in = make(3, 2, 2, unit(rng), 0.5);
    Matrix c(6, 1);
    for (Index i = 0; i < 6; ++i) c(i) = gauss(rng);
    c *= 1.2 / c.norm();  // pushes site occupations past the bound
    ConstraintState st = ConstraintState::initial(3, 1.0 + 9.0 * unit(rng));
    for (Index i = 0; i < 3; ++i) st.multipliers[i] = unit(rng);
    const OrbitalSet orb{3, 2, c};
    const Matrix numeric = numeric_gradient(
        [&](const Matrix& m) { return augmented_lagrangian(in.ops, OrbitalSet{3, 2, m}, st); }, c);
    const Matrix analytic = lagrangian_gradient(in.ops, orb, st);
    EXPECT_LT((numeric - analytic).norm() / analytic.norm(), 1e-6) << trial;
  }
}

TEST(InitialOrbitals, AreOrthonormalAndSeedDeterministic) {
  const auto m = CavityLatticeModel::build(box6(0.4, 0.3));
  const DressedOperators ops = dressed_operators(m);
  const OrbitalSet a = initial_orbitals(m, ops, 1e-2, 5);
  const OrbitalSet b = initial_orbitals(m, ops, 1e-2, 5);
  const OrbitalSet c = initial_orbitals(m, ops, 1e-2, 6);
  EXPECT_LT(a.orthonormality_error(), 1e-13);
  EXPECT_EQ(a.coefficients, b.coefficients);
  EXPECT_GT((a.coefficients - c.coefficients).norm(), 1e-6);
}

TEST(InitialOrbitals, UnperturbedStartSpansLowestLevels) {
  const auto m = CavityLatticeModel::build(box6(0.4, 0.0));
  const DressedOperators ops = dressed_operators(m);
  const OrbitalSet o = initial_orbitals(m, ops, 0.0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(ops.h_one, Eigen::EigenvaluesOnly);
  EXPECT_NEAR((o.coefficients.transpose() * ops.h_one * o.coefficients).trace(), eig.eigenvalues().head(2).sum(),
              1e-12);
}

TEST(InnerMinimize, LowersLagrangianAndKeepsOrthonormality) {
  const auto m = CavityLatticeModel::build(box6(0.4, 0.4));
  const DressedOperators ops = dressed_operators(m);
  const OrbitalSet start = initial_orbitals(m, ops, 0.5, 3);
  ConstraintState st = ConstraintState::initial(6, 10.0);
  const double l0 = augmented_lagrangian(ops, start, st);
  std::vector<double> trace;
  const InnerResult r = inner_minimize(ops, start, st, 1e-6, 2000, [&](const TraceRow& row) { trace.push_back(row.energy); });
  EXPECT_LT(r.lagrangian, l0);
  EXPECT_NEAR(r.lagrangian, augmented_lagrangian(ops, r.orbitals, st), 1e-10);
  EXPECT_LT(r.orbitals.orthonormality_error(), 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.gradient_norm, 1e-6);
  EXPECT_FALSE(trace.empty());
}

TEST(InnerMinimize, StationaryPointSatisfiesAufbauFockCondition) {
  const auto m = CavityLatticeModel::build(box6(0.8, 0.3));
  const DressedOperators ops = dressed_operators(m);
  const InnerResult r =
      inner_minimize(ops, initial_orbitals(m, ops, 1e-2, 0), ConstraintState::inactive(6), 1e-8, 5000);
  const Matrix fc = fock_apply_block(ops, r.orbitals, r.orbitals.coefficients);
  const Matrix residual = fc - r.orbitals.coefficients * (r.orbitals.coefficients.transpose() * fc);
  EXPECT_LT(residual.norm(), 1e-6);
}

TEST(Solve, UncoupledBoxReachesAufbauEnergy) {
  const auto m = CavityLatticeModel::build(box6(0.4, 0.0));
  const double e = 2.0 * (oracle::chain_level(1, 6, 0.5) + oracle::chain_level(2, 6, 0.5)) + 0.2;
  for (SolverMode mode : {SolverMode::Polaritonic, SolverMode::Fermionic}) {
    ScfOptions o;
    o.mode = mode;
    const ScfSolution s = solve(m, o);
    EXPECT_TRUE(s.converged);
    EXPECT_NEAR(s.physical_energy, e, 1e-6) << to_string(mode);
  }
}

TEST(Solve, PolaritonicRespectsBoundWhereFermionicViolatesIt) {
  const auto m = CavityLatticeModel::build(box6(0.2, 0.0));
  ScfOptions f;
  f.mode = SolverMode::Fermionic;
  const ScfSolution fhf = solve(m, f);
  const ScfSolution phf = solve(m, ScfOptions{});
  EXPECT_NEAR(fhf.density.occ_e().maxCoeff(), 4.0, 1e-6);
  EXPECT_LE(phf.density.occ_e().maxCoeff(), 2.0 + 1e-6);
  EXPECT_LT(phf.max_violation, 1e-6);
  EXPECT_LT(fhf.physical_energy, phf.physical_energy);
  EXPECT_TRUE(phf.converged);
}

TEST(Solve, PolaritonicEnergyIsVariationalAgainstExact) {
  for (double ratio : {0.2, 0.5}) {
    const auto m = CavityLatticeModel::build(box6(0.4, ratio));
    const ScfSolution s = solve(m, ScfOptions{});
    EXPECT_GE(s.physical_energy, solve_exact(m).energy - 1e-6) << ratio;
  }
}

TEST(Solve, RepeatedRunsAreBitIdentical) {
  const auto m = CavityLatticeModel::build(box6(0.4, 0.35));
  ScfOptions o;
  o.seed = 42;
  const ScfSolution a = solve(m, o);
  const ScfSolution b = solve(m, o);
  EXPECT_EQ(a.physical_energy, b.physical_energy);
  EXPECT_EQ(a.orbitals.coefficients, b.orbitals.coefficients);
  EXPECT_EQ(a.outer_iterations, b.outer_iterations);
}

TEST(Solve, ConstraintMultipliersStayNonNegative) {
  const auto m = CavityLatticeModel::build(box6(0.2, 0.2));
  const ScfSolution s = solve(m, ScfOptions{});
  EXPECT_GE(s.constraints.multipliers.minCoeff(), 0.0);
  EXPECT_GT(s.constraints.multipliers.maxCoeff(), 0.0);
}
