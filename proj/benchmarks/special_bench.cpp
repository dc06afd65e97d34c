#include <benchmark/benchmark.h>

#include "wgscat/special.hpp"

// Hankel evaluations dominate kernel assembly, so per-call cost matters.
static void BM_Hankel0Small(benchmark::State& state) {
  double z = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wgscat::special::hankel0(z));
  }
}
BENCHMARK(BM_Hankel0Small);

static void BM_Hankel0Large(benchmark::State& state) {
  double z = 41.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wgscat::special::hankel0(z));
  }
}
BENCHMARK(BM_Hankel0Large);

static void BM_Hankel1Small(benchmark::State& state) {
  double z = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(wgscat::special::hankel1(z));
  }
}
BENCHMARK(BM_Hankel1Small);
