// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "spn/hessian.hpp"
#include "spn/integrators.hpp"
#include "spn/wiener.hpp"

namespace {

using namespace spn;

GroundState ground(int d, int grid, double cutoff) {
  const TorusSpec spec(d, 2, grid);
  const auto sigma = IonDensityModel::perturbed_box(spec, PerturbedBoxDensity{}, 1.0);
  return build_ground_state(enumerate_basis(spec, cutoff), sigma, 1.0);
}

void BM_BasisEnumeration(benchmark::State& state) {
  const TorusSpec spec(2, 2, 16);
  const double cutoff = static_cast<double>(state.range(0)) * kPi * kPi;
  std::size_t size = 0;
  for (auto _ : state) {
    auto basis = enumerate_basis(spec, cutoff);
    size = basis->size();
    benchmark::DoNotOptimize(basis);
  }
  state.counters["determinants"] = static_cast<double>(size);
}
BENCHMARK(BM_BasisEnumeration)->Arg(5)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_Rhs(benchmark::State& state) {
  const auto gs = ground(1, 32, static_cast<double>(state.range(0)) * kTwoPi * kTwoPi);
  CrystalState x = gs.state();
  x.ions.q(0, 0) += 0.01;
  for (auto _ : state) benchmark::DoNotOptimize(rhs(x, gs.sigma));
  state.counters["determinants"] = static_cast<double>(gs.psi0.size());
}
BENCHMARK(BM_Rhs)->Arg(5)->Arg(20)->Arg(60)->Unit(benchmark::kMicrosecond);

void BM_MidpointStep(benchmark::State& state) {
  const auto gs = ground(1, 32, 5.0 * kTwoPi * kTwoPi);
  CrystalState x = gs.state();
  x.ions.p(0, 0) = 0.01;
  const EvolveOptions opt{Method::implicit_midpoint, 1e-3, 1e-3, 1e-12, 50, 1};
  for (auto _ : state) benchmark::DoNotOptimize(evolve(x, gs.sigma, opt));
}
BENCHMARK(BM_MidpointStep)->Unit(benchmark::kMicrosecond);

void BM_HessianAssemble(benchmark::State& state) {
  const auto gs = ground(2, 16, static_cast<double>(state.range(0)) * kPi * kPi);
  for (auto _ : state) benchmark::DoNotOptimize(hessian_assemble(gs));
  state.counters["dimension"] = static_cast<double>(coordinate_dimension(gs));
}
BENCHMARK(BM_HessianAssemble)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_WienerReport(benchmark::State& state) {
  const TorusSpec spec(3, static_cast<int>(state.range(0)), 4 * static_cast<int>(state.range(0)));
  const auto sigma = IonDensityModel::perturbed_box(spec, PerturbedBoxDensity{}, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(wiener_report(sigma));
}
BENCHMARK(BM_WienerReport)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
