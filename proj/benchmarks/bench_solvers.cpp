#include <benchmark/benchmark.h>

#include "enaqt/enaqt.hpp"

namespace {

using namespace enaqt;

TransportModel disordered_tree(unsigned generations, double dephasing) {
  const Topology tree = build_binary_tree(generations);
  const RealVector eps = sample_site_energies({0.8, 7}, 0, tree.n_sites());
  return TransportModel(tree, eps, 0, 1.0, 0.01, dephasing);
}

void BM_MasterEquationRhs(benchmark::State& state) {
  const auto model = disordered_tree(static_cast<unsigned>(state.range(0)), 0.2);
  const MasterEquation rhs(model);
  const ComplexMatrix rho = initial_state(model.topology(), InitialState::leaf_mixture());
  for (auto _ : state) benchmark::DoNotOptimize(rhs(rho));
}
BENCHMARK(BM_MasterEquationRhs)->DenseRange(3, 5);

void BM_EfficiencyReduced(benchmark::State& state) {
  const auto model = disordered_tree(static_cast<unsigned>(state.range(0)), 0.2);
  const ComplexMatrix rho0 = initial_state(model.topology(), InitialState::leaf_mixture());
  for (auto _ : state) benchmark::DoNotOptimize(efficiency_reduced(rho0, model).eta);
}
BENCHMARK(BM_EfficiencyReduced)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void BM_EfficiencyDense(benchmark::State& state) {
  const auto model = disordered_tree(static_cast<unsigned>(state.range(0)), 0.2);
  const ComplexMatrix rho0 = initial_state(model.topology(), InitialState::leaf_mixture());
  for (auto _ : state) benchmark::DoNotOptimize(efficiency_liouvillian(rho0, model).eta);
}
BENCHMARK(BM_EfficiencyDense)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void BM_EfficiencyTimeStepping(benchmark::State& state) {
  const auto model = disordered_tree(static_cast<unsigned>(state.range(0)), 0.2);
  const ComplexMatrix rho0 = initial_state(model.topology(), InitialState::leaf_mixture());
  for (auto _ : state) benchmark::DoNotOptimize(efficiency_timestepping(rho0, model).eta);
}
BENCHMARK(BM_EfficiencyTimeStepping)->DenseRange(3, 4)->Unit(benchmark::kMillisecond);

void BM_InvariantSubspace(benchmark::State& state) {
  const Topology cube = build_hypercube(static_cast<unsigned>(state.range(0)));
  const ComplexMatrix h =
      assemble_system_hamiltonian(cube, RealVector::Zero(static_cast<Eigen::Index>(cube.n_sites())));
  for (auto _ : state) benchmark::DoNotOptimize(invariant_subspace(h, 0).dimension());
}
BENCHMARK(BM_InvariantSubspace)->DenseRange(3, 6);

}  // namespace

BENCHMARK_MAIN();
