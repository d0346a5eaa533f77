#include <benchmark/benchmark.h>

#include <cmath>

#include "lanemden/bubble_constants.hpp"
#include "lanemden/critical_hyperbola.hpp"
#include "lanemden/expansion.hpp"
#include "lanemden/ground_state.hpp"
#include "lanemden/kernel.hpp"
#include "lanemden/manifold.hpp"
#include "lanemden/potential.hpp"
#include "lanemden/reduced_energy.hpp"

using namespace lanemden;

namespace {

const HyperbolaPoint& point() {
  static const HyperbolaPoint hp = make_hyperbola_point(Exponent::parse("3/2"), 8);
  return hp;
}

const GroundState& ground_state() {
  static const GroundState gs = solve_ground_state(point());
  return gs;
}

const BubbleConstants& constants() {
  static const BubbleConstants c = compute_constants(ground_state());
  return c;
}

void BM_Shoot(benchmark::State& state) {
  const double a = ground_state().normalization().U_at_zero;
  for (auto _ : state) benchmark::DoNotOptimize(shoot(point(), a));
}
BENCHMARK(BM_Shoot)->Unit(benchmark::kMillisecond);

void BM_SolveGroundState(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(solve_ground_state(point()));
}
BENCHMARK(BM_SolveGroundState)->Unit(benchmark::kMillisecond);

void BM_ComputeConstants(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(compute_constants(ground_state()));
}
BENCHMARK(BM_ComputeConstants)->Unit(benchmark::kMillisecond);

void BM_EnergyTerms(benchmark::State& state) {
  const auto m = ModelManifold::sphere(8, 1.0);
  const ConstantPotential h{20.0};
  const auto b = assemble_bubble(m, ground_state(), 1e-3, m.base_point(), M_PI / 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(energy_terms(m, h, {b}, 1e-5, 1.0, 1.0));
}
BENCHMARK(BM_EnergyTerms)->Unit(benchmark::kMillisecond);

void BM_FindCriticalPoints(benchmark::State& state) {
  const auto m = ModelManifold::torus(8, 2.0 * M_PI);
  TrigPotential h;
  h.offset = 10.0;
  for (int i = 0; i < 8; ++i) h.terms.push_back({i, 0.5 + 0.1 * i, 1, 0.3 * (i + 1)});
  SearchOptions opts;
  opts.starts = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_critical_points(m, h, constants(), 1, 1.0, 1.0, opts));
}
BENCHMARK(BM_FindCriticalPoints)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_KernelResidual(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kernel_residual(ground_state()));
}
BENCHMARK(BM_KernelResidual)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
