#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sl2lab/cocycles.hpp"
#include "sl2lab/complexify.hpp"
#include "sl2lab/formulas.hpp"
#include "sl2lab/randprod.hpp"

using namespace sl2lab;

namespace {

std::vector<SL2> sample_list(std::size_t n, std::uint64_t seed) {
  const LawSpec law{LogUniformC{1.0, 10.0}, seed};
  std::vector<SL2> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample_matrix(law, i));
  return out;
}

void BM_OperatorNorm(benchmark::State& state) {
  const auto as = sample_list(256, 1);
  for (auto _ : state) {
    double acc = 0;
    for (const auto& a : as) acc += operator_norm(a);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_OperatorNorm);

void BM_PolarDecompose(benchmark::State& state) {
  const auto as = sample_list(256, 2);
  for (auto _ : state) {
    for (const auto& a : as) benchmark::DoNotOptimize(polar_decompose(a));
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_PolarDecompose);

void BM_Theorem1Check(benchmark::State& state) {
  const auto as = sample_list(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(theorem1_check(as, {}));
}
BENCHMARK(BM_Theorem1Check)->Arg(1)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_Theorem2KinkResolved(benchmark::State& state) {
  const auto as = sample_list(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(theorem2_check(as, {}));
}
BENCHMARK(BM_Theorem2KinkResolved)->Arg(1)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_Theorem2UniformGrid(benchmark::State& state) {
  const auto as = sample_list(4, 4);
  QuadratureSpec q;
  q.initial_grid = q.max_grid = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(grid_average(theorem2_integrand(as), q.max_grid));
}
BENCHMARK(BM_Theorem2UniformGrid)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

void BM_GridAverageThreads(benchmark::State& state) {
  const auto as = sample_list(4, 5);
  const auto f = theorem1_integrand(as);
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid_average(f, 1 << 16, static_cast<unsigned>(state.range(0))));
  }
}
BENCHMARK(BM_GridAverageThreads)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_HermanLyapunov(benchmark::State& state) {
  const CocycleSpec spec{CircleRotation{}, HermanMap{2.0}};
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_estimate(spec, {}, state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_HermanLyapunov)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_BernoulliSpectralGrowth(benchmark::State& state) {
  const CocycleSpec spec{BernoulliShift{7}, BernoulliHIR{}};
  for (auto _ : state) benchmark::DoNotOptimize(spectral_growth(spec, {}, state.range(0)));
}
BENCHMARK(BM_BernoulliSpectralGrowth)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_StarProbe(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(star_identity_probe(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_StarProbe)->Arg(12)->Arg(18)->Unit(benchmark::kMillisecond);

void BM_CentroCheck(benchmark::State& state) {
  const auto as = sample_list(4, 6);
  for (auto _ : state) benchmark::DoNotOptimize(centro_check(as));
}
BENCHMARK(BM_CentroCheck);

void BM_DedieuShub(benchmark::State& state) {
  const LawSpec law{ConstantC{2.0}, 1};
  for (auto _ : state) benchmark::DoNotOptimize(dedieu_shub_check(law, 10000, 1000));
}
BENCHMARK(BM_DedieuShub)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
