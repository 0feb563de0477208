#include <benchmark/benchmark.h>

#include <numbers>

#include "mubest/clifford.hpp"
#include "mubest/designs.hpp"
#include "mubest/estimation.hpp"
#include "mubest/simulation.hpp"

using namespace mubest;

namespace {

constexpr double kPi = std::numbers::pi;

const StateDesign& design960() {
  static const StateDesign d = clifford_design();
  return d;
}

void BM_CliffordGroup(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(clifford_group().order());
}
BENCHMARK(BM_CliffordGroup)->Unit(benchmark::kMillisecond);

void BM_SymmetricProjector(benchmark::State& state) {
  const TensorSpace space{4, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_projector(space).matrix.data());
}
BENCHMARK(BM_SymmetricProjector)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_FramePotential(benchmark::State& state) {
  const ComplexMatrix cols = design960().columns();
  for (auto _ : state) benchmark::DoNotOptimize(frame_potential(cols, 4));
}
BENCHMARK(BM_FramePotential)->Unit(benchmark::kMillisecond);

void BM_FramePotentialGradient(benchmark::State& state) {
  const ComplexMatrix cols = haar_random_states(4, 200, 1);
  for (auto _ : state) benchmark::DoNotOptimize(frame_potential_gradient(cols, 4).data());
}
BENCHMARK(BM_FramePotentialGradient)->Unit(benchmark::kMicrosecond);

void BM_TripleFidelity(benchmark::State& state) {
  const MubTriple t = mub_triple(kPi / 2, kPi / 2, kPi / 2);
  for (auto _ : state) benchmark::DoNotOptimize(triple_fidelity(t));
}
BENCHMARK(BM_TripleFidelity)->Unit(benchmark::kMillisecond);

void BM_EstimatorTable(benchmark::State& state) {
  const auto ms = mub_triple(kPi / 2, kPi / 2, kPi / 2).measurements();
  for (auto _ : state) benchmark::DoNotOptimize(build_estimator_table(ms, design960()).fidelity.data());
}
BENCHMARK(BM_EstimatorTable)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const MubTriple t = mub_triple(kPi / 2, kPi / 2, kPi / 2);
  SimConfig cfg;
  cfg.repetitions_per_block = static_cast<int>(state.range(0));
  cfg.blocks = 1;
  cfg.record_counts = false;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_protocol(t, design960(), cfg).mean_fidelity);
  state.SetItemsProcessed(state.iterations() * state.range(0) * 960);
}
BENCHMARK(BM_Simulate)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
