// Microbenchmarks for the exact kernels: the subset sweeps call rank()
// millions of times, so its constant factor dominates everything.

#include <benchmark/benchmark.h>

#include <random>

#include "framelab/frame.hpp"

namespace {

framelab::Frame random_frame(int n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> entry(-9, 9);
  framelab::Mat v(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) v(i, j) = entry(rng);
  return framelab::Frame(n, std::move(v));
}

void BM_ExactRank(benchmark::State& state) {
  const auto f = random_frame(int(state.range(0)), int(state.range(1)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(framelab::rank(f.vectors));
}
BENCHMARK(BM_ExactRank)->Args({8, 12})->Args({12, 20});

void BM_ComplementPropertySweep(benchmark::State& state) {
  const auto f = random_frame(4, int(state.range(0)), 11);
  for (auto _ : state)
    benchmark::DoNotOptimize(framelab::has_complement_property(f));
}
BENCHMARK(BM_ComplementPropertySweep)->Arg(10)->Arg(14)->Arg(18);

void BM_NormRetrievalSweep(benchmark::State& state) {
  const auto f = random_frame(4, int(state.range(0)), 13);
  for (auto _ : state) benchmark::DoNotOptimize(framelab::does_norm_retrieval(f));
}
BENCHMARK(BM_NormRetrievalSweep)->Arg(8)->Arg(12);

void BM_NormRetrievalSweepParallel(benchmark::State& state) {
  const auto f = random_frame(5, 14, 17);
  framelab::SweepOptions opt;
  opt.jobs = int(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(framelab::does_norm_retrieval(f, opt));
}
BENCHMARK(BM_NormRetrievalSweepParallel)->Arg(1)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
