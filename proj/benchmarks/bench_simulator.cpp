#include <benchmark/benchmark.h>

#include "saplab/simulator.hpp"

namespace {

using namespace saplab;

void BM_MeasureInterference(benchmark::State& state) {
  NetworkParams p;
  Rng rng = make_rng(1, 0, 0);
  const auto primaries = sample_ppp(p.lambda1, 500.0, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        measure_interference({250.0, 250.0}, primaries, p, 500.0, rng, SensingMode::Faded));
  }
}
BENCHMARK(BM_MeasureInterference);

void BM_AseExperiment(benchmark::State& state) {
  Scenario s;
  s.protocol = static_cast<Protocol>(state.range(0));
  s.trials = 5000;
  for (auto _ : state) benchmark::DoNotOptimize(run_ase_experiment(s).ase.mean);
}
BENCHMARK(BM_AseExperiment)
    ->Arg(static_cast<int>(Protocol::SapExact))
    ->Arg(static_cast<int>(Protocol::TxThreshold))
    ->Unit(benchmark::kMillisecond);

}  // namespace
