#include <benchmark/benchmark.h>

#include <random>

#include "stochastid/pca_leg.hpp"
#include "stochastid/pipeline.hpp"
#include "stochastid/svd_leg.hpp"
#include "stochastid/synth.hpp"

using namespace stochastid;

namespace {

TimeSeries make(SyntheticKind kind, std::size_t n) {
  synth::GeneratorSpec spec;
  spec.kind = kind;
  spec.n = n;
  spec.seed = 1;
  return synth::generate(spec);
}

pca::LinearModel fixed_model() {
  pca::LinearModel m;
  m.w = {1.0, 1.0};
  m.b = -5.0;
  return m;
}

void BM_Analyze(benchmark::State& state) {
  const auto s = make(static_cast<SyntheticKind>(state.range(1)), static_cast<std::size_t>(state.range(0)));
  const auto model = fixed_model();
  for (auto _ : state) benchmark::DoNotOptimize(analyze(s, {}, model));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Analyze)
    ->ArgsProduct({benchmark::CreateRange(8192, 65536, 2), {0, 3}})
    ->Unit(benchmark::kMillisecond);

void BM_SvdLeg(benchmark::State& state) {
  const auto s = make(SyntheticKind::Lorenz, 16384);
  PipelineConfig cfg;
  cfg.embedding.m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_svd_leg(s, cfg));
}
BENCHMARK(BM_SvdLeg)->DenseRange(2, 10, 4)->Unit(benchmark::kMillisecond);

void BM_RatioCurve(benchmark::State& state) {
  const auto s = make(SyntheticKind::PinkNoise, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pca::build_ratio_curve(s, 9.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RatioCurve)->RangeMultiplier(2)->Range(4096, 131072)->Complexity();

void BM_Betti(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::bernoulli_distribution coin(0.55);
  svd::BinaryImage img(res);
  for (int r = 0; r < res; ++r) {
    for (int c = 0; c < res; ++c) img.set(r, c, coin(rng));
  }
  for (auto _ : state) benchmark::DoNotOptimize(svd::betti(img));
}
BENCHMARK(BM_Betti)->RangeMultiplier(4)->Range(32, 512);

void BM_EigenRatio(benchmark::State& state) {
  const auto s = make(SyntheticKind::WhiteNoise, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pca::eigen_ratio(s.samples()));
}
BENCHMARK(BM_EigenRatio)->RangeMultiplier(8)->Range(256, 131072);

}  // namespace

BENCHMARK_MAIN();
