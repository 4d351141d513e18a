#include "phaselift/sampling.hpp"
#include "phaselift/signals.hpp"
#include "phaselift/solver.hpp"

#include <benchmark/benchmark.h>

using namespace phaselift;

namespace {

SampleSet instance(std::size_t n, double noise) {
  const std::size_t m = 10 * n;
  SampleSet s;
  s.ensemble = Ensemble::gaussian();
  s.seed = 1;
  s.a = sample_matrix(s.ensemble, m, n, 1);
  s.w = noise_with_level(m, noise, 2);
  s.y = measure(s.a, generate_signal(SignalSpec::flat(0.5, n), 3), s.w);
  return s;
}

void BM_SolveNoiseless(benchmark::State& state) {
  const SampleSet s = instance(static_cast<std::size_t>(state.range(0)), 0.0);
  const SolverConfig cfg = SolverConfig::for_measurements(s.m());
  for (auto _ : state) benchmark::DoNotOptimize(solve_noiseless(s, cfg));
}
BENCHMARK(BM_SolveNoiseless)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SolveNoisy(benchmark::State& state) {
  const SampleSet s = instance(static_cast<std::size_t>(state.range(0)), 1e-3);
  SolverConfig cfg = SolverConfig::for_measurements(s.m());
  cfg.max_iters = 500;
  for (auto _ : state) benchmark::DoNotOptimize(solve_noisy(s, cfg));
}
BENCHMARK(BM_SolveNoisy)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
