#include <benchmark/benchmark.h>

#include <cmath>

#include "ves/data_io.hpp"
#include "ves/linearization.hpp"
#include "ves/pipeline.hpp"
#include "ves/production.hpp"
#include "ves/regression.hpp"

namespace {

std::vector<ves::PlantRecord> synth(std::size_t n, double mu) {
  ves::SynthConfig cfg;
  cfg.params = {1.0, 0.5, 1.0, mu};
  cfg.n = n;
  cfg.noise_sd = 0.05;
  return ves::generate(cfg);
}

void BM_EvalVes(benchmark::State& state) {
  const ves::VesParams p{1.0, 0.4, 0.8, 0.7};
  double k = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ves::eval_ves(p, k, 2.0));
    k = k < 100.0 ? k * 1.01 : 1.0;
  }
}
BENCHMARK(BM_EvalVes);

void BM_FactorPrices(benchmark::State& state) {
  const ves::VesParams p{1.0, 0.4, 0.8, 0.7};
  for (auto _ : state) benchmark::DoNotOptimize(ves::factor_prices(p, 2.5));
}
BENCHMARK(BM_FactorPrices);

void BM_FitOls(benchmark::State& state) {
  const auto rows = synth(static_cast<std::size_t>(state.range(0)), 0.7);
  std::vector<ves::Observation> obs;
  for (const auto& r : rows) obs.push_back(ves::to_observation(r));
  const auto design = ves::build_design(ves::ModelSpec::polynomial(4), obs);
  for (auto _ : state) benchmark::DoNotOptimize(ves::fit_ols(design.matrix, design.response));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FitOls)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oN);

void BM_InvertLinearization(benchmark::State& state) {
  const auto c = ves::linearize_ves({1.0, 0.3, 2.0, 1.0}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(ves::invert_linearization(c));
}
BENCHMARK(BM_InvertLinearization)->Unit(benchmark::kMicrosecond);

void BM_EstimateGroup(benchmark::State& state) {
  const auto rows = synth(static_cast<std::size_t>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(ves::estimate_group("bench", rows));
}
BENCHMARK(BM_EstimateGroup)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
