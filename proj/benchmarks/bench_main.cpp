#include <benchmark/benchmark.h>

#include "regimeshift/boundary.hpp"
#include "regimeshift/exponents.hpp"
#include "regimeshift/monte_carlo.hpp"
#include "regimeshift/pricing.hpp"

using namespace regimeshift;

namespace {

const OptionSpec kPut{OptionKind::Put, 1.0};
const MarketParams kFig2{0.04, 0.5, 0.10, 0.0, 0.25, 0.0};
const MarketParams kFig3{0.04, 0.4, 0.40, 0.0175, 0.25, 0.0175};

void BM_Exponents(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(compute_exponents(kFig3, kPut));
}
BENCHMARK(BM_Exponents);

void BM_Case1Root(benchmark::State& state) {
  const auto e = compute_exponents(kFig2, kPut);
  for (auto _ : state) benchmark::DoNotOptimize(solve_case1_root(e, kPut));
}
BENCHMARK(BM_Case1Root);

void BM_Case2Root(benchmark::State& state) {
  const auto e = compute_exponents(kFig3, kPut);
  for (auto _ : state) benchmark::DoNotOptimize(solve_case2_root(e, kPut));
}
BENCHMARK(BM_Case2Root);

void BM_BuildModel(benchmark::State& state) {
  const MarketParams& p = state.range(0) == 1 ? kFig2 : kFig3;
  for (auto _ : state) benchmark::DoNotOptimize(build_price_model(p, kPut));
}
BENCHMARK(BM_BuildModel)->Arg(1)->Arg(2);

void BM_PriceCurve(benchmark::State& state) {
  const auto m = build_price_model(kFig3, kPut);
  for (auto _ : state) {
    double sum = 0.0;
    for (int i = 0; i < 200; ++i) sum += price(0.2 + 0.014 * i, m);
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_PriceCurve);

void BM_CriticalLambda(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(critical_lambda(kFig3, kPut));
}
BENCHMARK(BM_CriticalLambda);

void BM_MonteCarlo(benchmark::State& state) {
  const auto b = solve_boundaries(kFig3, kPut);
  McConfig cfg;
  cfg.paths = static_cast<std::uint64_t>(state.range(0));
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mc_price(kFig3, kPut, b, 1.0, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
