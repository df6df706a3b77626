#include <benchmark/benchmark.h>

#include <vector>

#include "dixie/centering.hpp"
#include "dixie/exact_moments.hpp"
#include "dixie/gamma_kernel.hpp"
#include "dixie/montecarlo.hpp"
#include "dixie/quadrature.hpp"

namespace {

void BM_ErlangSurvival(benchmark::State& state) {
  const dixie::Shape m(static_cast<int>(state.range(0)));
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dixie::erlang_survival(m, x));
    x = x < 40.0 ? x + 0.37 : 0.5;
  }
}
BENCHMARK(BM_ErlangSurvival)->Arg(1)->Arg(3)->Arg(10);

void BM_HazardIndex(benchmark::State& state) {
  const dixie::Shape m(static_cast<int>(state.range(0)));
  double y = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dixie::hazard_index(m, y));
    y = y < 30.0 ? y * 1.3 : 0.01;
  }
}
BENCHMARK(BM_HazardIndex)->Arg(2)->Arg(5);

void BM_SolveCentering(benchmark::State& state) {
  const dixie::Shape m(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dixie::solve_centering(1e6, m));
}
BENCHMARK(BM_SolveCentering)->Arg(1)->Arg(4);

void BM_ExactMoments(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const dixie::CollectorModel model{dixie::Shape(2), dixie::ProbabilityVector::power_law(n, 1.0)};
  for (auto _ : state) benchmark::DoNotOptimize(dixie::rising_moment_exact(model, 2));
}
BENCHMARK(BM_ExactMoments)->Arg(4)->Arg(8)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_QuadratureMoments(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const dixie::CollectorModel model{dixie::Shape(2), dixie::ProbabilityVector::power_law(n, 1.0)};
  for (auto _ : state) benchmark::DoNotOptimize(dixie::poissonized_moments_quadrature(model));
}
BENCHMARK(BM_QuadratureMoments)->Arg(10)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const dixie::CollectorModel model{dixie::Shape(2), dixie::ProbabilityVector::power_law(50, 1.0)};
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(dixie::simulate_poissonized({10000, 0, model, threads}));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Simulate)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
