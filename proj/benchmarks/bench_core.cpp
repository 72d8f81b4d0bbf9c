#include <benchmark/benchmark.h>

#include "esqpt/banded_eigen.hpp"
#include "esqpt/dos.hpp"
#include "esqpt/spectra.hpp"

using namespace esqpt;

static void BM_BandEigenvalues(benchmark::State& state) {
  const auto h = build_matrix(ModelParams(0.5, 0.7, 1.0, state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(band_eigenvalues(h));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BandEigenvalues)->RangeMultiplier(4)->Range(100, 6400)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_SpectralWeights(benchmark::State& state) {
  const ModelParams p(0.5, 0.0, 0.75, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_weights(p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SpectralWeights)->RangeMultiplier(4)->Range(100, 6400)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_RmaxFromWeights(benchmark::State& state) {
  const auto sw = spectral_weights(ModelParams(0.5, 0.0, 0.75, state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(r_max(sw));
}
BENCHMARK(BM_RmaxFromWeights)->Arg(1000)->Arg(6400)->Unit(benchmark::kMillisecond);

static void BM_DosSemiclassical(benchmark::State& state) {
  const ModelParams p(0.5, 0.7, 0.0, 1000);
  const auto edges = dos_exact(p, 100).bin_edges;
  for (auto _ : state)
    benchmark::DoNotOptimize(dos_semiclassical(p, edges, static_cast<std::size_t>(state.range(0)), 1));
}
BENCHMARK(BM_DosSemiclassical)->Arg(512)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
