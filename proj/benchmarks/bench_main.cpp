#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "stable_sde/counterexample.hpp"
#include "stable_sde/phi.hpp"
#include "stable_sde/random.hpp"
#include "stable_sde/stable_driver.hpp"
#include "stable_sde/stats.hpp"
#include "stable_sde/time_change_solver.hpp"
#include "stable_sde/truncation_solver.hpp"

using namespace stable_sde;

namespace {

void BM_ExactIncrement(benchmark::State& state) {
  const ExactIncrementSampler draw(StableParams::normalized(0.5), 1e-4);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(draw(rng));
}
BENCHMARK(BM_ExactIncrement);

// Argument: cutoff exponent k, ε = 10^{-k}.
void BM_TruncatedPath(benchmark::State& state) {
  const auto params = StableParams::normalized(0.7);
  const double eps = std::pow(10.0, -static_cast<double>(state.range(0)));
  Rng rng(2);
  std::size_t events = 0;
  for (auto _ : state) {
    const auto path = sample_truncated_path(params, 1.0, eps, rng);
    events += path.size();
    benchmark::DoNotOptimize(path.total());
  }
  state.counters["events"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_TruncatedPath)->DenseRange(1, 4);

void BM_SolveTruncated(benchmark::State& state) {
  const auto phi = MonotonePhi::shifted_arctan(2.0, 0.6366);
  Rng rng(3);
  const auto path = sample_truncated_path(StableParams::normalized(0.7), 1.0, 1e-4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_truncated(phi, 0.0, path).terminal());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(path.size()));
}
BENCHMARK(BM_SolveTruncated);

void BM_Ladder(benchmark::State& state) {
  const auto phi = MonotonePhi::shifted_arctan(2.0, 0.6366);
  const auto params = StableParams::normalized(0.7);
  const std::vector<double> cutoffs{0.1, 0.03, 0.01, 0.003, 0.001};
  Rng rng(4);
  for (auto _ : state) {
    const auto ladder = build_ladder(phi, 0.0, params, 1.0, cutoffs, rng);
    benchmark::DoNotOptimize(ladder_violations(ladder));
  }
}
BENCHMARK(BM_Ladder);

void BM_TimeChange(benchmark::State& state) {
  const auto phi = MonotonePhi::shifted_arctan(2.0, 0.6366);
  Rng rng(5);
  const auto driver = sample_truncated_path(StableParams::normalized(0.5), 2.0, 1e-3, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(clock_roundtrip_residual(phi, 0.0, driver, 0.5));
  }
}
BENCHMARK(BM_TimeChange);

void BM_KolmogorovSmirnov(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(6);
  std::vector<double> a(n), b(n);
  for (auto& v : a) v = rng.uniform();
  for (auto& v : b) v = rng.uniform();
  const SampleSet sa(a), sb(b);
  for (auto _ : state) benchmark::DoNotOptimize(ks_two_sample(sa, sb).p_value);
}
BENCHMARK(BM_KolmogorovSmirnov)->Arg(1000)->Arg(10000);

void BM_CounterexampleRun(benchmark::State& state) {
  const auto grid_m = static_cast<std::size_t>(state.range(0));
  Rng rng(7);
  for (auto _ : state) {
    const auto run = run_counterexample(0.5, 0.5, 4.0, grid_m, rng);
    benchmark::DoNotOptimize(run.clock().total());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(4 * grid_m));
}
BENCHMARK(BM_CounterexampleRun)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ClockTotal(benchmark::State& state) {
  Rng rng(8);
  for (auto _ : state) benchmark::DoNotOptimize(sample_clock_total(0.5, 0.5, 1.0, 10000, rng).total);
}
BENCHMARK(BM_ClockTotal)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
