#include <benchmark/benchmark.h>

#include "saplab/analytic.hpp"
#include "saplab/optimizer.hpp"

namespace {

using namespace saplab;

void BM_AccessProbExact(benchmark::State& state) {
  const NetworkParams p;
  const double r_i = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(access_prob_exact(r_i, 1.0, p));
}
BENCHMARK(BM_AccessProbExact)->Arg(36)->Arg(200)->Arg(2000);

void BM_AccessProbLowerBound(benchmark::State& state) {
  const NetworkParams p;
  const double r_i = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(access_prob_lb(r_i, 1.0, p));
}
BENCHMARK(BM_AccessProbLowerBound)->Arg(12)->Arg(36)->Arg(200);

void BM_EmptyBallRadius(benchmark::State& state) {
  NetworkParams p;
  p.alpha = static_cast<double>(state.range(0));
  const double i = mean_interference(10.0, p);
  for (auto _ : state) benchmark::DoNotOptimize(empty_ball_radius(i, p).radius);
}
BENCHMARK(BM_EmptyBallRadius)->Arg(3)->Arg(4);

void BM_AvgAccessProb(benchmark::State& state) {
  const NetworkParams p;
  for (auto _ : state) benchmark::DoNotOptimize(avg_access_prob(3.0, p));
}
BENCHMARK(BM_AvgAccessProb)->Unit(benchmark::kMillisecond);

void BM_AseSurface(benchmark::State& state) {
  const NetworkParams p;
  const auto grid = db_grid(-10.0, 20.0, 30.0 / static_cast<double>(state.range(0) - 1));
  std::vector<double> lin;
  for (double v : grid) lin.push_back(db_to_linear(v));
  for (auto _ : state) benchmark::DoNotOptimize(ase_surface(p, lin, lin).values.data());
}
BENCHMARK(BM_AseSurface)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
