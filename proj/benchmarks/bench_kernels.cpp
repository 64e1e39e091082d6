#include <benchmark/benchmark.h>

#include "polariton/config.hpp"
#include "polariton/fock_oracle.hpp"
#include "polariton/scf.hpp"

using namespace polariton;

namespace {

CavityLatticeModel lattice(int n_sites, int n_electrons, int n_photon, double ratio) {
  PointConfig c;
  c.n_sites = n_sites;
  c.hopping = 0.5;
  c.omega = 0.4;
  c.coupling_over_omega = ratio;
  c.n_photon_basis = n_photon;
  c.n_electrons = n_electrons;
  return build_model(c);
}

void BM_FockApply(benchmark::State& state) {
  const auto m = lattice(int(state.range(0)), 4, 5, 0.3);
  const DressedOperators ops = dressed_operators(m);
  const OrbitalSet orb = initial_orbitals(m, ops, 1e-2, 0);
  for (auto _ : state) benchmark::DoNotOptimize(fock_apply_block(ops, orb, orb.coefficients));
}
BENCHMARK(BM_FockApply)->Arg(6)->Arg(30)->Arg(64);

void BM_LagrangianGradient(benchmark::State& state) {
  const auto m = lattice(int(state.range(0)), 4, 5, 0.3);
  const DressedOperators ops = dressed_operators(m);
  const OrbitalSet orb = initial_orbitals(m, ops, 1e-2, 0);
  const ConstraintState st = ConstraintState::initial(m.n_sites(), 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(lagrangian_gradient(ops, orb, st));
}
BENCHMARK(BM_LagrangianGradient)->Arg(6)->Arg(30);

void BM_HamiltonianAssembly(benchmark::State& state) {
  const auto m = lattice(6, 4, 5, 0.3);
  const DeterminantBasis basis(6, 4, 5);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_hamiltonian(m, basis));
  state.counters["dim"] = double(basis.size());
}
BENCHMARK(BM_HamiltonianAssembly)->Unit(benchmark::kMillisecond);

void BM_ExactGroundState(benchmark::State& state) {
  const auto m = lattice(6, 4, 5, 0.3);
  const DeterminantBasis basis(6, 4, 5);
  const SparseMatrix h = assemble_hamiltonian(m, basis);
  const auto method = state.range(0) == 0 ? EigenMethod::Dense : EigenMethod::Lanczos;
  for (auto _ : state) benchmark::DoNotOptimize(ground_state(h, basis, method).energy);
}
BENCHMARK(BM_ExactGroundState)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_HartreeFockSolve(benchmark::State& state) {
  const auto m = lattice(int(state.range(0)), 4, 5, 0.3);
  ScfOptions o;
  o.mode = state.range(1) == 0 ? SolverMode::Polaritonic : SolverMode::Fermionic;
  for (auto _ : state) benchmark::DoNotOptimize(solve(m, o).physical_energy);
}
BENCHMARK(BM_HartreeFockSolve)->Args({6, 0})->Args({6, 1})->Args({30, 0})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
